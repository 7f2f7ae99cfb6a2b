#pragma once

#include "hyp/bigfloat.hpp"
#include "hyp/expr.hpp"

#include <map>
#include <optional>
#include <stdexcept>

namespace hyp {

enum class EvalErrorCode {
    Pole,               // Gamma/polygamma at a nonpositive integer reached the top level
    PoleClash,          // pole*0 or pole/pole without a dedicated limit entry
    DivergentSeries,
    DegenerateSeries,   // bottom parameter pole before termination
    ExcessTooSmall,
    NonIntegerNeg1Pow,
    DivByZero,
    UnboundSymbol,
    TooSlow,            // adaptive summation exceeded its term budget
    NonCancellingPole,  // gamma_ratio_limit with only one singular form
    BadArgument,
};

struct EvalError : std::runtime_error {
    EvalErrorCode code;
    EvalError(EvalErrorCode c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

enum class PolePolicy { Error, SignedInfinity };

struct EvalContext {
    int digits = 40;
    std::map<std::string, Rat> binding;
    PolePolicy pole_policy = PolePolicy::Error;
    Rat sigma_min = Rat(1, 2);     // refusal threshold for non-terminating series
    long max_terms = 4000000;      // budget for adaptive infinite summation
    bool oracle_direct = false;    // oracle mode: pFq by direct truncation only

    EvalContext with_digits(int d) const {
        EvalContext c = *this;
        c.digits = d;
        return c;
    }
};

// Intermediate value with Gamma-pole propagation: x/pole collapses to 0,
// pole*0 and pole/pole are hard errors (they need a dedicated limit).
struct EvalValue {
    BigFloat v;
    bool pole = false;

    static EvalValue finite(BigFloat x) { return {std::move(x), false}; }
    static EvalValue make_pole(int digits) { return {BigFloat(digits), true}; }
};

// Exact Bernoulli numbers B_0..B_n (cached, grows on demand).
const Rat& bernoulli(int n);

BigFloat gamma_bf(const BigFloat& x);
BigFloat digamma_bf(const BigFloat& x);
// n >= 1; argument may be any non-pole real (recurrence shift handles x <= 0).
BigFloat polygamma_bf(int n, const BigFloat& x, int digits);
// Hurwitz zeta for real s > 1, a > 0.
BigFloat hurwitz_zeta(const BigFloat& s, const BigFloat& a, int digits);
// (d/ds) Hurwitz zeta; sum_{k>=0} ln(a+k) (a+k)^{-s} = -hurwitz_zeta_ds(s,a).
BigFloat hurwitz_zeta_ds(const BigFloat& s, const BigFloat& a, int digits);
// d/ds Hurwitz zeta for real s > 1, a > 0 (log-weighted tails).
BigFloat hurwitz_zeta_ds(const BigFloat& s, const BigFloat& a, int digits);

// Full evaluator. Throws EvalError; poles surface per ctx.pole_policy.
BigFloat eval_expr(const ExprPtr& e, const EvalContext& ctx);
EvalValue eval_value(const ExprPtr& e, const EvalContext& ctx);

// Exact evaluation over rationals. Gamma factors are admitted when they pair
// into integer-offset ratios (Pochhammer cancellation); returns nullopt when
// the value is not exactly rational by these rules. Throws EvalError::Pole
// when the exact value has an uncancelled pole.
std::optional<Rat> eval_exact(const ExprPtr& e, const std::map<std::string, Rat>& binding);

enum class RatioKind { GammaOverGamma, PsiOverGamma };

// Finite limit of Gamma(numer)/Gamma(denom) (or psi(arg)/Gamma(arg)) where the
// forms hit nonpositive integers simultaneously under the binding.
BigFloat gamma_ratio_limit(const LinForm& numer, const LinForm& denom,
                           const std::map<std::string, Rat>& binding,
                           const std::string& direction_symbol, int digits,
                           RatioKind kind = RatioKind::GammaOverGamma);

// Exact counterpart used by tests and by the exact evaluator:
// (-1)^(p-q) * q!/p! with p = -numer_value, q = -denom_value.
Rat gamma_ratio_limit_exact(const Rat& numer_value, const Rat& denom_value);

} // namespace hyp
