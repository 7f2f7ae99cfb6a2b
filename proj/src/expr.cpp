#include "hyp/expr.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace hyp {

namespace {

ExprPtr make(ExprKind k) {
    auto e = std::make_shared<Expr>();
    const_cast<Expr&>(*e).kind = k;
    return e;
}

// Precedence: Add=1, Mul=2, Div=2, Pow=3, atom=4.
int prec_of(const Expr& e) {
    switch (e.kind) {
        case ExprKind::Add: return 1;
        case ExprKind::Sym: {
            size_t n = e.form.terms().size();
            if (n == 0) return e.form.constant().sign() < 0 ? 2 : 4;
            if (n == 1 && e.form.constant().is_zero()) {
                const auto& [_, c] = *e.form.terms().begin();
                if (c == Rat(1)) return 4;
                if (c.sign() > 0) return 2;
                return 2; // leading minus binds like a product
            }
            return 1;
        }
        case ExprKind::RatLit:
            if (e.rat.sign() < 0) return 2;
            return e.rat.is_integer() ? 4 : 2;
        case ExprKind::Mul: return 2;
        case ExprKind::Div: return 2;
        case ExprKind::Pow: return 3;
        default: return 4;
    }
}

std::string str_prec(const ExprPtr& e, int ctx);

std::string join_add(const std::vector<ExprPtr>& kids) {
    std::ostringstream os;
    bool first = true;
    for (const auto& k : kids) {
        std::string s = str_prec(k, 1);
        if (!first && !s.empty() && s[0] != '-') os << "+";
        os << s;
        first = false;
    }
    return os.str();
}

std::string str_prec(const ExprPtr& e, int ctx) {
    std::string s = e->str();
    if (prec_of(*e) < ctx) return "(" + s + ")";
    return s;
}

std::string sort_key(const std::string& printed) {
    if (!printed.empty() && printed[0] == '-') return printed.substr(1) + "\x01";
    return printed;
}

} // namespace

std::string Expr::str() const {
    std::ostringstream os;
    switch (kind) {
        case ExprKind::RatLit: return rat.str();
        case ExprKind::Pi: return "pi";
        case ExprKind::EulerGamma: return "eg";
        case ExprKind::CatalanG: return "G";
        case ExprKind::Sym: return form.str();
        case ExprKind::Neg1Pow: {
            std::string ex = form.str();
            if (form.single_symbol()) return "(-1)^" + ex;
            return "(-1)^(" + ex + ")";
        }
        case ExprKind::Gamma: return "Gamma(" + kids[0]->str() + ")";
        case ExprKind::Polygamma:
            if (order == 0) return "psi(" + kids[0]->str() + ")";
            return "psi(" + std::to_string(order) + "," + kids[0]->str() + ")";
        case ExprKind::Sin: return "sin(" + kids[0]->str() + ")";
        case ExprKind::Cos: return "cos(" + kids[0]->str() + ")";
        case ExprKind::Ln: return "ln(" + kids[0]->str() + ")";
        case ExprKind::Sqrt: return "sqrt(" + kids[0]->str() + ")";
        case ExprKind::Arctanh: return "arctanh(" + kids[0]->str() + ")";
        case ExprKind::Pow:
            return str_prec(kids[0], 4) + "^" + str_prec(kids[1], 4);
        case ExprKind::Binom:
            return "binom(" + kids[0]->str() + "," + kids[1]->str() + ")";
        case ExprKind::Pochhammer:
            return "poch(" + kids[0]->str() + "," + kids[1]->str() + ")";
        case ExprKind::Sum:
            os << "sum(" << index << "," << lower.str() << ","
               << (upper_infinite ? std::string("inf") : upper.str()) << ","
               << kids[0]->str() << ")";
            return os.str();
        case ExprKind::Hyp: return hyp.str();
        case ExprKind::Add: return join_add(kids);
        case ExprKind::Mul: {
            size_t i = 0;
            bool first = true;
            if (kids.size() > 1 && kids[0]->kind == ExprKind::RatLit &&
                kids[0]->rat.sign() < 0) {
                os << "-";
                Rat a = kids[0]->rat.abs();
                if (a != Rat(1)) {
                    os << a.str();
                    first = false;
                }
                i = 1;
            }
            for (; i < kids.size(); ++i) {
                if (!first) os << "*";
                os << str_prec(kids[i], 3); // parenthesize anything looser than a power
                first = false;
            }
            return os.str();
        }
        case ExprKind::Div:
            return str_prec(kids[0], 2) + "/" + str_prec(kids[1], 3);
    }
    return "?";
}

bool HypSpec::operator==(const HypSpec& o) const {
    if (tops.size() != o.tops.size() || bottoms.size() != o.bottoms.size()) return false;
    auto sorted = [](std::vector<LinForm> v) { std::sort(v.begin(), v.end()); return v; };
    return sorted(tops) == sorted(o.tops) && sorted(bottoms) == sorted(o.bottoms);
}

HypSpec HypSpec::canonical() const {
    HypSpec c = *this;
    std::sort(c.tops.begin(), c.tops.end());
    std::sort(c.bottoms.begin(), c.bottoms.end());
    return c;
}

HypSpec HypSpec::substitute(const std::map<std::string, LinForm>& binding) const {
    HypSpec out;
    for (const auto& t : tops) out.tops.push_back(t.substitute(binding));
    for (const auto& b : bottoms) out.bottoms.push_back(b.substitute(binding));
    return out;
}

std::string HypSpec::str() const {
    std::ostringstream os;
    os << tops.size() << "F" << bottoms.size() << "(";
    for (size_t i = 0; i < tops.size(); ++i) os << (i ? "," : "") << tops[i].str();
    os << ";";
    for (size_t i = 0; i < bottoms.size(); ++i) os << (i ? "," : "") << bottoms[i].str();
    os << ")";
    return os.str();
}

std::vector<std::string> HypSpec::symbols() const {
    std::set<std::string> s;
    for (const auto& t : tops)
        for (const auto& n : t.symbols()) s.insert(n);
    for (const auto& b : bottoms)
        for (const auto& n : b.symbols()) s.insert(n);
    return {s.begin(), s.end()};
}

ExprPtr lit(Rat r) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::RatLit;
    e->rat = std::move(r);
    return e;
}
ExprPtr lit(long n) { return lit(Rat(n)); }
ExprPtr pi_const() { return make(ExprKind::Pi); }
ExprPtr euler_gamma() { return make(ExprKind::EulerGamma); }
ExprPtr catalan_g() { return make(ExprKind::CatalanG); }

ExprPtr sym(const LinForm& f) {
    if (f.is_constant()) return lit(f.constant());
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Sym;
    e->form = f;
    return e;
}
ExprPtr sym(const std::string& name) { return sym(LinForm::symbol(name)); }

ExprPtr neg1pow(const LinForm& f) {
    if (f.is_constant()) {
        if (!f.constant().is_integer())
            throw std::domain_error("(-1)^x with non-integer constant exponent");
        return lit((f.constant().num() % 2) == 0 ? 1 : -1);
    }
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Neg1Pow;
    e->form = f;
    return e;
}

namespace {
ExprPtr unary(ExprKind k, ExprPtr a) {
    auto e = std::make_shared<Expr>();
    e->kind = k;
    e->kids = {std::move(a)};
    return e;
}
} // namespace

ExprPtr gammaf(ExprPtr a) { return unary(ExprKind::Gamma, std::move(a)); }
ExprPtr polygamma(int order, ExprPtr a) {
    auto e = unary(ExprKind::Polygamma, std::move(a));
    const_cast<Expr&>(*e).order = order;
    return e;
}
ExprPtr sinf(ExprPtr a) { return unary(ExprKind::Sin, std::move(a)); }
ExprPtr cosf(ExprPtr a) { return unary(ExprKind::Cos, std::move(a)); }
ExprPtr lnf(ExprPtr a) { return unary(ExprKind::Ln, std::move(a)); }
ExprPtr sqrtf_(ExprPtr a) { return unary(ExprKind::Sqrt, std::move(a)); }
ExprPtr arctanhf(ExprPtr a) { return unary(ExprKind::Arctanh, std::move(a)); }

ExprPtr powf(ExprPtr base, ExprPtr expo) {
    if (base->kind == ExprKind::RatLit && base->rat == Rat(-1)) {
        if (auto f = as_linform(expo)) return neg1pow(*f);
        throw std::domain_error("(-1)^x requires an affine exponent");
    }
    if (expo->kind == ExprKind::RatLit && expo->rat == Rat(1)) return base;
    if (expo->kind == ExprKind::RatLit && expo->rat.is_zero()) return lit(1);
    if (base->kind == ExprKind::RatLit && expo->kind == ExprKind::RatLit &&
        expo->rat.is_integer() && expo->rat.abs() <= Rat(64)) {
        return lit(base->rat.pow_int(expo->rat.as_long()));
    }
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Pow;
    e->kids = {std::move(base), std::move(expo)};
    return e;
}

ExprPtr binom(ExprPtr n, ExprPtr k) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Binom;
    e->kids = {std::move(n), std::move(k)};
    return e;
}

ExprPtr pochhammer(ExprPtr x, ExprPtr n) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Pochhammer;
    e->kids = {std::move(x), std::move(n)};
    return e;
}

ExprPtr sum_expr(std::string index, LinForm lower, LinForm upper, ExprPtr body) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Sum;
    e->index = std::move(index);
    e->lower = std::move(lower);
    e->upper = std::move(upper);
    e->kids = {std::move(body)};
    return e;
}

ExprPtr sum_expr_inf(std::string index, LinForm lower, ExprPtr body) {
    auto e = sum_expr(std::move(index), std::move(lower), LinForm(), std::move(body));
    const_cast<Expr&>(*e).upper_infinite = true;
    return e;
}

ExprPtr hyp_expr(HypSpec spec) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Hyp;
    e->hyp = std::move(spec);
    return e;
}

ExprPtr add(std::vector<ExprPtr> kids) {
    std::vector<ExprPtr> flat;
    LinForm acc;
    bool have_lin = false;
    for (auto& k : kids) {
        if (k->kind == ExprKind::Add) {
            for (const auto& g : k->kids) {
                if (auto f = as_linform(g)) { acc = acc + *f; have_lin = true; }
                else flat.push_back(g);
            }
        } else if (auto f = as_linform(k)) {
            acc = acc + *f;
            have_lin = true;
        } else {
            flat.push_back(std::move(k));
        }
    }
    if (have_lin && !acc.is_zero()) flat.push_back(sym(acc));
    if (flat.empty()) return lit(0);
    if (flat.size() == 1) return flat[0];
    std::stable_sort(flat.begin(), flat.end(), [](const ExprPtr& a, const ExprPtr& b) {
        return sort_key(a->str()) < sort_key(b->str());
    });
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Add;
    e->kids = std::move(flat);
    return e;
}

ExprPtr add(ExprPtr a, ExprPtr b) { return add(std::vector<ExprPtr>{std::move(a), std::move(b)}); }
ExprPtr sub(ExprPtr a, ExprPtr b) { return add(std::move(a), negate(std::move(b))); }

ExprPtr mul(std::vector<ExprPtr> kids) {
    std::vector<ExprPtr> flat, denoms;
    Rat coeff(1);
    std::optional<LinForm> linfactor;
    auto take = [&](const ExprPtr& g) {
        if (g->kind == ExprKind::RatLit) {
            coeff *= g->rat;
        } else if (g->kind == ExprKind::Sym && !linfactor) {
            linfactor = g->form;
        } else if (g->kind == ExprKind::Div) {
            flat.push_back(g->kids[0]);
            denoms.push_back(g->kids[1]);
        } else {
            flat.push_back(g);
        }
    };
    for (auto& k : kids) {
        if (k->kind == ExprKind::Mul) {
            for (const auto& g : k->kids) take(g);
        } else {
            take(k);
        }
    }
    if (!denoms.empty()) {
        std::vector<ExprPtr> nums = std::move(flat);
        if (linfactor) nums.push_back(sym(*linfactor));
        nums.push_back(lit(coeff));
        return divf(mul(std::move(nums)), mul(std::move(denoms)));
    }
    if (coeff.is_zero()) return lit(0);
    if (linfactor) {
        if (coeff != Rat(1)) {
            linfactor = linfactor->scaled(coeff);
            coeff = Rat(1);
        }
        flat.push_back(sym(*linfactor));
    }
    if (flat.empty()) return lit(coeff);
    std::stable_sort(flat.begin(), flat.end(), [](const ExprPtr& a, const ExprPtr& b) {
        return sort_key(a->str()) < sort_key(b->str());
    });
    if (coeff != Rat(1)) flat.insert(flat.begin(), lit(coeff));
    if (flat.size() == 1) return flat[0];
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Mul;
    e->kids = std::move(flat);
    return e;
}

ExprPtr mul(ExprPtr a, ExprPtr b) { return mul(std::vector<ExprPtr>{std::move(a), std::move(b)}); }

ExprPtr divf(ExprPtr a, ExprPtr b) {
    if (b->kind == ExprKind::RatLit) {
        if (b->rat.is_zero()) throw std::domain_error("division by zero literal");
        return mul(std::move(a), lit(Rat(1) / b->rat));
    }
    if (a->kind == ExprKind::Div)
        return divf(a->kids[0], mul(a->kids[1], std::move(b)));
    if (b->kind == ExprKind::Div)
        return divf(mul(std::move(a), b->kids[1]), b->kids[0]);
    if (a->kind == ExprKind::RatLit && a->rat.is_zero()) return lit(0);
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Div;
    e->kids = {std::move(a), std::move(b)};
    return e;
}

ExprPtr negate(ExprPtr a) { return mul(lit(-1), std::move(a)); }

std::optional<LinForm> as_linform(const ExprPtr& e) {
    if (e->kind == ExprKind::RatLit) return LinForm(e->rat);
    if (e->kind == ExprKind::Sym) return e->form;
    return std::nullopt;
}

bool expr_equal_structural(const ExprPtr& a, const ExprPtr& b) {
    if (a.get() == b.get()) return true;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case ExprKind::RatLit: return a->rat == b->rat;
        case ExprKind::Pi:
        case ExprKind::EulerGamma:
        case ExprKind::CatalanG: return true;
        case ExprKind::Sym:
        case ExprKind::Neg1Pow: return a->form == b->form;
        case ExprKind::Hyp: return a->hyp == b->hyp;
        default: break;
    }
    if (a->kind == ExprKind::Polygamma && a->order != b->order) return false;
    if (a->kind == ExprKind::Sum) {
        if (a->upper_infinite != b->upper_infinite) return false;
        if (a->lower != b->lower) return false;
        if (!a->upper_infinite && a->upper != b->upper) return false;
        if (a->index != b->index) {
            // alpha-equivalence: rename b's index to a's
            std::map<std::string, LinForm> ren{{b->index, LinForm::symbol(a->index)}};
            return expr_equal_structural(a->kids[0], expr_substitute(b->kids[0], ren));
        }
    }
    if (a->kids.size() != b->kids.size()) return false;
    for (size_t i = 0; i < a->kids.size(); ++i)
        if (!expr_equal_structural(a->kids[i], b->kids[i])) return false;
    return true;
}

ExprPtr expr_substitute(const ExprPtr& e, const std::map<std::string, LinForm>& binding) {
    if (binding.empty()) return e;
    switch (e->kind) {
        case ExprKind::RatLit:
        case ExprKind::Pi:
        case ExprKind::EulerGamma:
        case ExprKind::CatalanG: return e;
        case ExprKind::Sym: return sym(e->form.substitute(binding));
        case ExprKind::Neg1Pow: return neg1pow(e->form.substitute(binding));
        case ExprKind::Hyp: return hyp_expr(e->hyp.substitute(binding));
        case ExprKind::Sum: {
            auto inner = binding;
            inner.erase(e->index); // the index shadows outer symbols
            // capture avoidance: rename the index if a substituted value uses it
            std::string idx = e->index;
            bool captured = false;
            for (const auto& [k, v] : inner)
                for (const auto& s : v.symbols())
                    if (s == idx) captured = true;
            ExprPtr body = e->kids[0];
            if (captured) {
                std::string fresh = idx + "_";
                std::vector<std::string> used;
                collect_symbols(body, used);
                while (std::find(used.begin(), used.end(), fresh) != used.end()) fresh += "_";
                body = expr_substitute(body, {{idx, LinForm::symbol(fresh)}});
                idx = fresh;
            }
            body = expr_substitute(body, inner);
            auto r = sum_expr(idx, e->lower.substitute(binding),
                              e->upper_infinite ? LinForm() : e->upper.substitute(binding), body);
            const_cast<Expr&>(*r).upper_infinite = e->upper_infinite;
            return r;
        }
        default: break;
    }
    std::vector<ExprPtr> kids;
    kids.reserve(e->kids.size());
    for (const auto& k : e->kids) kids.push_back(expr_substitute(k, binding));
    switch (e->kind) {
        case ExprKind::Gamma: return gammaf(kids[0]);
        case ExprKind::Polygamma: return polygamma(e->order, kids[0]);
        case ExprKind::Sin: return sinf(kids[0]);
        case ExprKind::Cos: return cosf(kids[0]);
        case ExprKind::Ln: return lnf(kids[0]);
        case ExprKind::Sqrt: return sqrtf_(kids[0]);
        case ExprKind::Arctanh: return arctanhf(kids[0]);
        case ExprKind::Pow: return powf(kids[0], kids[1]);
        case ExprKind::Binom: return binom(kids[0], kids[1]);
        case ExprKind::Pochhammer: return pochhammer(kids[0], kids[1]);
        case ExprKind::Add: return add(std::move(kids));
        case ExprKind::Mul: return mul(std::move(kids));
        case ExprKind::Div: return divf(kids[0], kids[1]);
        default: throw std::logic_error("expr_substitute: unhandled node");
    }
}

bool contains_hyp(const ExprPtr& e) {
    if (e->kind == ExprKind::Hyp) return true;
    for (const auto& k : e->kids)
        if (contains_hyp(k)) return true;
    return false;
}

bool contains_sum(const ExprPtr& e) {
    if (e->kind == ExprKind::Sum) return true;
    for (const auto& k : e->kids)
        if (contains_sum(k)) return true;
    return false;
}

void collect_symbols(const ExprPtr& e, std::vector<std::string>& out) {
    auto push = [&out](const std::vector<std::string>& v) {
        for (const auto& s : v)
            if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
    };
    switch (e->kind) {
        case ExprKind::Sym:
        case ExprKind::Neg1Pow: push(e->form.symbols()); return;
        case ExprKind::Hyp: push(e->hyp.symbols()); return;
        case ExprKind::Sum: {
            push(e->lower.symbols());
            if (!e->upper_infinite) push(e->upper.symbols());
            std::vector<std::string> inner;
            collect_symbols(e->kids[0], inner);
            for (const auto& s : inner)
                if (s != e->index &&
                    std::find(out.begin(), out.end(), s) == out.end())
                    out.push_back(s);
            return;
        }
        default:
            for (const auto& k : e->kids) collect_symbols(k, out);
    }
}

} // namespace hyp
