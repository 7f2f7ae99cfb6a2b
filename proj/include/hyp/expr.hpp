#pragma once

#include "hyp/linform.hpp"

#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace hyp {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// pFq(1) parameter lists. Order is preserved as written (transform rules are
// slot-sensitive); equality is multiset equality.
struct HypSpec {
    std::vector<LinForm> tops;
    std::vector<LinForm> bottoms;

    HypSpec() = default;
    HypSpec(std::vector<LinForm> t, std::vector<LinForm> b)
        : tops(std::move(t)), bottoms(std::move(b)) {}

    bool operator==(const HypSpec& o) const;
    bool operator!=(const HypSpec& o) const { return !(*this == o); }

    // Tops and bottoms each sorted by the LinForm total order.
    HypSpec canonical() const;
    HypSpec substitute(const std::map<std::string, LinForm>& binding) const;
    std::string str() const;
    std::vector<std::string> symbols() const;
};

enum class ExprKind {
    RatLit, Pi, EulerGamma, CatalanG,
    Sym,        // affine form over symbols
    Neg1Pow,    // (-1)^form, form integer-valued
    Gamma, Polygamma, Sin, Cos, Ln, Sqrt, Arctanh,
    Pow, Binom, Pochhammer,
    Sum,        // sum(index, lower..upper, body); upper may be infinite
    Hyp,
    Add, Mul, Div,
};

// Immutable expression node. Add and Mul are n-ary with operands sorted by
// their printed form, so structurally equal expressions share one shape.
struct Expr {
    ExprKind kind;

    Rat rat;                    // RatLit
    LinForm form;               // Sym, Neg1Pow
    int order = 0;              // Polygamma derivative order
    std::string index;          // Sum index symbol
    LinForm lower, upper;       // Sum bounds
    bool upper_infinite = false; // Sum to infinity (upper ignored)
    HypSpec hyp;                // Hyp
    std::vector<ExprPtr> kids;  // children for all composite nodes

    std::string str() const;
};

// Constructors fold rational arithmetic and normalize n-ary Add/Mul.
ExprPtr lit(Rat r);
ExprPtr lit(long n);
ExprPtr pi_const();
ExprPtr euler_gamma();
ExprPtr catalan_g();
ExprPtr sym(const LinForm& f);
ExprPtr sym(const std::string& name);
ExprPtr neg1pow(const LinForm& f);
ExprPtr gammaf(ExprPtr a);
ExprPtr polygamma(int order, ExprPtr a);
ExprPtr sinf(ExprPtr a);
ExprPtr cosf(ExprPtr a);
ExprPtr lnf(ExprPtr a);
ExprPtr sqrtf_(ExprPtr a);
ExprPtr arctanhf(ExprPtr a);
ExprPtr powf(ExprPtr base, ExprPtr expo);
ExprPtr binom(ExprPtr n, ExprPtr k);
ExprPtr pochhammer(ExprPtr x, ExprPtr n);
ExprPtr sum_expr(std::string index, LinForm lower, LinForm upper, ExprPtr body);
ExprPtr sum_expr_inf(std::string index, LinForm lower, ExprPtr body);
ExprPtr hyp_expr(HypSpec spec);
ExprPtr add(std::vector<ExprPtr> kids);
ExprPtr add(ExprPtr a, ExprPtr b);
ExprPtr sub(ExprPtr a, ExprPtr b);
ExprPtr mul(std::vector<ExprPtr> kids);
ExprPtr mul(ExprPtr a, ExprPtr b);
ExprPtr divf(ExprPtr a, ExprPtr b);
ExprPtr negate(ExprPtr a);

// Structural equality (trees identical after LinForm and chain normalization).
bool expr_equal_structural(const ExprPtr& a, const ExprPtr& b);

// Capture-avoiding substitution of symbols by affine forms. Sum indices
// shadow outer symbols and are never rebound.
ExprPtr expr_substitute(const ExprPtr& e, const std::map<std::string, LinForm>& binding);

// If the expression is affine in its symbols, return the equivalent form.
std::optional<LinForm> as_linform(const ExprPtr& e);

bool contains_hyp(const ExprPtr& e);
bool contains_sum(const ExprPtr& e);
void collect_symbols(const ExprPtr& e, std::vector<std::string>& out);

} // namespace hyp
