#include "hyp/linform.hpp"

#include <sstream>
#include <stdexcept>

namespace hyp {

LinForm LinForm::symbol(const std::string& name, Rat coeff) {
    LinForm f;
    if (!coeff.is_zero()) f.terms_.emplace(name, std::move(coeff));
    return f;
}

Rat LinForm::coeff(const std::string& name) const {
    auto it = terms_.find(name);
    return it == terms_.end() ? Rat(0) : it->second;
}

std::optional<std::string> LinForm::single_symbol() const {
    if (!constant_.is_zero() || terms_.size() != 1) return std::nullopt;
    const auto& [name, c] = *terms_.begin();
    if (c != Rat(1)) return std::nullopt;
    return name;
}

LinForm LinForm::operator-() const {
    LinForm r;
    r.constant_ = -constant_;
    for (const auto& [k, v] : terms_) r.terms_.emplace(k, -v);
    return r;
}

LinForm LinForm::operator+(const LinForm& o) const {
    LinForm r = *this;
    r.constant_ += o.constant_;
    for (const auto& [k, v] : o.terms_) {
        auto it = r.terms_.find(k);
        if (it == r.terms_.end()) {
            r.terms_.emplace(k, v);
        } else {
            it->second += v;
            if (it->second.is_zero()) r.terms_.erase(it);
        }
    }
    return r;
}

LinForm LinForm::operator-(const LinForm& o) const { return *this + (-o); }

LinForm LinForm::scaled(const Rat& r) const {
    LinForm out;
    if (r.is_zero()) return out;
    out.constant_ = constant_ * r;
    for (const auto& [k, v] : terms_) out.terms_.emplace(k, v * r);
    return out;
}

Rat LinForm::eval(const std::map<std::string, Rat>& binding) const {
    Rat acc = constant_;
    for (const auto& [k, v] : terms_) {
        auto it = binding.find(k);
        if (it == binding.end())
            throw std::domain_error("unbound symbol '" + k + "' in form " + str());
        acc += v * it->second;
    }
    return acc;
}

LinForm LinForm::substitute(const std::map<std::string, LinForm>& binding) const {
    LinForm r(constant_);
    for (const auto& [k, v] : terms_) {
        auto it = binding.find(k);
        if (it == binding.end())
            r = r + LinForm::symbol(k, v);
        else
            r = r + it->second.scaled(v);
    }
    return r;
}

std::string LinForm::str() const {
    if (terms_.empty()) return constant_.str();
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, v] : terms_) {
        if (v.sign() < 0) {
            os << "-";
        } else if (!first) {
            os << "+";
        }
        Rat a = v.abs();
        if (a != Rat(1)) os << a.str() << "*";
        os << k;
        first = false;
    }
    if (!constant_.is_zero()) {
        os << (constant_.sign() < 0 ? "-" : "+") << constant_.abs().str();
    }
    return os.str();
}

bool LinForm::operator<(const LinForm& o) const {
    if (terms_.size() != o.terms_.size()) return terms_.size() < o.terms_.size();
    auto it = terms_.begin();
    auto jt = o.terms_.begin();
    for (; it != terms_.end(); ++it, ++jt) {
        if (it->first != jt->first) return it->first < jt->first;
        if (it->second != jt->second) return it->second < jt->second;
    }
    return constant_ < o.constant_;
}

std::vector<std::string> LinForm::symbols() const {
    std::vector<std::string> out;
    out.reserve(terms_.size());
    for (const auto& [k, _] : terms_) out.push_back(k);
    return out;
}

} // namespace hyp
