#pragma once

#include "hyp/rat.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hyp {

// Affine form  c0 + sum(coeff_i * symbol_i)  with exact rational coefficients.
// Zero coefficients are never stored.
class LinForm {
public:
    LinForm() = default;
    /*implicit*/ LinForm(Rat constant) : constant_(std::move(constant)) {}
    /*implicit*/ LinForm(long constant) : constant_(constant) {}
    static LinForm symbol(const std::string& name, Rat coeff = Rat(1));

    const Rat& constant() const { return constant_; }
    const std::map<std::string, Rat>& terms() const { return terms_; }
    bool is_constant() const { return terms_.empty(); }
    bool is_zero() const { return terms_.empty() && constant_.is_zero(); }
    // The coefficient of `name` (zero if absent).
    Rat coeff(const std::string& name) const;
    // True when the form is exactly one symbol with coefficient 1 and no constant.
    std::optional<std::string> single_symbol() const;

    LinForm operator-() const;
    LinForm operator+(const LinForm& o) const;
    LinForm operator-(const LinForm& o) const;
    LinForm scaled(const Rat& r) const;

    bool operator==(const LinForm& o) const {
        return constant_ == o.constant_ && terms_ == o.terms_;
    }
    bool operator!=(const LinForm& o) const { return !(*this == o); }

    // Exact evaluation; every symbol must be bound.
    Rat eval(const std::map<std::string, Rat>& binding) const;

    // Substitutes symbols by forms; unbound symbols stay.
    LinForm substitute(const std::map<std::string, LinForm>& binding) const;

    // Canonical text: terms in lexicographic symbol order, constant last.
    // Examples: "a+b-c", "c+n", "2*a-1/2", "-n", "0".
    std::string str() const;

    // Total order used for canonical sorting of parameter lists.
    bool operator<(const LinForm& o) const;

    std::vector<std::string> symbols() const;

private:
    Rat constant_;
    std::map<std::string, Rat> terms_;
};

} // namespace hyp
