#include "hyp/numeval.hpp"
#include "hyp/detail_hypeval.hpp"
#include "hyp/detail_infsum.hpp"

#include <algorithm>
#include <mutex>
#include <vector>

namespace hyp {

namespace {

Rat rat_factorial(long n) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
    return Rat(f);
}

Rat rat_binom_ll(long n, long k) {
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return Rat(b);
}

} // namespace

const Rat& bernoulli(int n) {
    static std::vector<Rat> cache{Rat(1)};
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    while (static_cast<int>(cache.size()) <= n) {
        long m = static_cast<long>(cache.size());
        Rat acc(0);
        for (long k = 0; k < m; ++k) acc += rat_binom_ll(m + 1, k) * cache[k];
        cache.push_back(-acc / Rat(m + 1));
    }
    return cache[n];
}

BigFloat gamma_bf(const BigFloat& x) {
    BigFloat r(x.digits());
    mpfr_gamma(r.raw(), x.raw(), MPFR_RNDN);
    return r;
}

BigFloat digamma_bf(const BigFloat& x) {
    BigFloat r(x.digits());
    mpfr_digamma(r.raw(), x.raw(), MPFR_RNDN);
    return r;
}

BigFloat hurwitz_zeta(const BigFloat& s, const BigFloat& a, int digits) {
    int wd = digits + 10;
    BigFloat eps = BigFloat::eps(digits + 5, wd);
    double ad = a.to_double();
    long M = std::max<long>(0, static_cast<long>(19 + 0.37 * digits - ad) + 1);
    for (int attempt = 0; attempt < 6; ++attempt) {
        BigFloat acc(wd);
        for (long k = 0; k < M; ++k) {
            BigFloat term = (a + BigFloat::from_long(k, wd)).pow(-s);
            acc += term;
        }
        BigFloat x = a + BigFloat::from_long(M, wd);
        BigFloat one = BigFloat::from_long(1, wd);
        BigFloat tail = x.pow(one - s) / (s - one);
        tail += x.pow(-s) * BigFloat::from_rat(Rat(1, 2), wd);
        // Euler-Maclaurin correction: sum_j B_2j/(2j)! (s)_{2j-1} x^{1-s-2j}
        BigFloat poch = s; // (s)_1
        BigFloat x2 = x * x;
        BigFloat xpow = x.pow(-s - one); // x^{-s-1}
        bool converged = false;
        for (int j = 1; j <= 400; ++j) {
            BigFloat term = BigFloat::from_rat(bernoulli(2 * j) / rat_factorial(2 * j), wd) *
                            poch * xpow;
            tail += term;
            if (term.abs() < eps) {
                converged = true;
                break;
            }
            // advance (s)_{2j-1} -> (s)_{2j+1} and x^{1-s-2j} -> x^{-1-s-2j}
            BigFloat sj = s + BigFloat::from_long(2 * j - 1, wd);
            poch = poch * sj * (sj + one);
            xpow = xpow / x2;
        }
        if (converged) return acc + tail;
        M = M * 2 + 16;
    }
    throw EvalError(EvalErrorCode::TooSlow, "hurwitz_zeta did not converge");
}

BigFloat hurwitz_zeta_ds(const BigFloat& s, const BigFloat& a, int digits) {
    int wd = digits + 10;
    BigFloat eps = BigFloat::eps(digits + 5, wd);
    double ad = a.to_double();
    long M = std::max<long>(0, static_cast<long>(19 + 0.37 * digits - ad) + 1);
    for (int attempt = 0; attempt < 6; ++attempt) {
        BigFloat acc(wd);
        for (long k = 0; k < M; ++k) {
            BigFloat xk = a + BigFloat::from_long(k, wd);
            acc -= xk.ln() * xk.pow(-s);
        }
        BigFloat x = a + BigFloat::from_long(M, wd);
        BigFloat one = BigFloat::from_long(1, wd);
        BigFloat lx = x.ln();
        BigFloat sm1 = s - one;
        // d/ds [x^{1-s}/(s-1)] = x^{1-s} (-ln x/(s-1) - 1/(s-1)^2)
        BigFloat tail = x.pow(one - s) * (-(lx / sm1) - one / (sm1 * sm1));
        tail -= x.pow(-s) * BigFloat::from_rat(Rat(1, 2), wd) * lx;
        // d/ds [B_2j/(2j)! (s)_{2j-1} x^{1-s-2j}]
        BigFloat poch = s;          // (s)_{2j-1}
        BigFloat dpoch = one;       // its derivative
        BigFloat x2 = x * x;
        BigFloat xpow = x.pow(-s - one);
        bool converged = false;
        for (int j = 1; j <= 400; ++j) {
            BigFloat bfac = BigFloat::from_rat(bernoulli(2 * j) / rat_factorial(2 * j), wd);
            BigFloat term = bfac * (dpoch - poch * lx) * xpow;
            tail += term;
            BigFloat probe = bfac.abs() * (poch.abs() * lx.abs() + dpoch.abs()) * xpow.abs();
            if (probe < eps) {
                converged = true;
                break;
            }
            BigFloat sj = s + BigFloat::from_long(2 * j - 1, wd);
            BigFloat sj1 = sj + one;
            // product rule: d[(p)(sj)(sj+1)] = dp*sj*sj1 + p*(sj1 + sj)
            dpoch = dpoch * sj * sj1 + poch * (sj + sj1);
            poch = poch * sj * sj1;
            xpow = xpow / x2;
        }
        if (converged) return acc + tail;
        M = M * 2 + 16;
    }
    throw EvalError(EvalErrorCode::TooSlow, "hurwitz_zeta_ds did not converge");
}

BigFloat polygamma_bf(int n, const BigFloat& x, int digits) {
    if (n == 0) return digamma_bf(x);
    int wd = digits + 10;
    BigFloat shift(wd);
    BigFloat xs = x;
    BigFloat one = BigFloat::from_long(1, wd);
    // psi(n,x) = psi(n,x+1) - (-1)^n n! x^(-n-1); shift until the argument is >= 1
    long nshift = 0;
    while (xs < one) {
        shift += xs.pow_long(-(n + 1));
        xs += one;
        if (++nshift > 1000000)
            throw EvalError(EvalErrorCode::BadArgument, "polygamma argument too negative");
    }
    BigFloat fact(wd);
    mpfr_fac_ui(fact.raw(), static_cast<unsigned long>(n), MPFR_RNDN);
    BigFloat z = hurwitz_zeta(BigFloat::from_long(n + 1, wd), xs, digits);
    BigFloat val = fact * z; // |psi(n,xs)|
    if (n % 2 == 0) val = -val;
    // undo the shift: psi(n,x) = psi(n,x+K) - (-1)^n n! * sum (x+j)^(-n-1)
    BigFloat corr = fact * shift;
    if (n % 2 != 0) corr = -corr;
    return val - corr;
}

Rat gamma_ratio_limit_exact(const Rat& numer_value, const Rat& denom_value) {
    if (!numer_value.is_nonpositive_integer() || !denom_value.is_nonpositive_integer())
        throw EvalError(EvalErrorCode::NonCancellingPole,
                        "gamma_ratio_limit: both forms must hit nonpositive integers");
    long p = -numer_value.as_long();
    long q = -denom_value.as_long();
    Rat r = rat_factorial(q) / rat_factorial(p);
    if ((p - q) % 2 != 0) r = -r;
    return r;
}

BigFloat gamma_ratio_limit(const LinForm& numer, const LinForm& denom,
                           const std::map<std::string, Rat>& binding,
                           const std::string& direction_symbol, int digits, RatioKind kind) {
    Rat nv = numer.eval(binding);
    Rat dv = denom.eval(binding);
    if (kind == RatioKind::PsiOverGamma) {
        // lim psi(t)/Gamma(t) at t -> -k: (-1)^(k+1) k!
        if (numer != denom)
            throw EvalError(EvalErrorCode::BadArgument,
                            "psi/Gamma limit needs identical argument forms");
        if (!nv.is_nonpositive_integer())
            throw EvalError(EvalErrorCode::NonCancellingPole,
                            "psi/Gamma limit: argument is not a nonpositive integer");
        long k = -nv.as_long();
        Rat r = rat_factorial(k);
        if (k % 2 == 0) r = -r;
        return BigFloat::from_rat(r, digits);
    }
    if (numer.coeff(direction_symbol).is_zero() && denom.coeff(direction_symbol).is_zero())
        throw EvalError(EvalErrorCode::BadArgument,
                        "direction symbol '" + direction_symbol + "' appears in neither form");
    if (nv.is_nonpositive_integer() != dv.is_nonpositive_integer())
        throw EvalError(EvalErrorCode::NonCancellingPole,
                        "only one of the forms is singular at the binding");
    if (!nv.is_nonpositive_integer()) {
        // no pole at all: plain ratio
        int wd = digits + 5;
        return gamma_bf(BigFloat::from_rat(nv, wd)) / gamma_bf(BigFloat::from_rat(dv, wd));
    }
    return BigFloat::from_rat(gamma_ratio_limit_exact(nv, dv), digits);
}

// ---------------------------------------------------------------------------
// Exact evaluation: rationals with pairable Gamma factors.
// ---------------------------------------------------------------------------

namespace {

struct ExactPole {};

struct GProd {
    Rat coeff = Rat(1);
    std::vector<Rat> gnum, gden;

    static GProd of(Rat r) {
        GProd g;
        g.coeff = std::move(r);
        return g;
    }
    GProd& operator*=(const GProd& o) {
        coeff *= o.coeff;
        gnum.insert(gnum.end(), o.gnum.begin(), o.gnum.end());
        gden.insert(gden.end(), o.gden.begin(), o.gden.end());
        return *this;
    }
    GProd inverse() const {
        GProd g;
        if (coeff.is_zero()) throw EvalError(EvalErrorCode::DivByZero, "exact division by zero");
        g.coeff = Rat(1) / coeff;
        g.gnum = gden;
        g.gden = gnum;
        return g;
    }

    // Pochhammer ratio Gamma(h+d)/Gamma(h), d integer. Zero factors are legal
    // (they encode Gamma poles in the denominator); a zero factor downstairs
    // means a pole upstairs.
    static std::optional<Rat> poch_ratio(const Rat& h, long d, bool& pole) {
        Rat r(1);
        if (d >= 0) {
            Rat x = h;
            for (long i = 0; i < d; ++i) {
                r *= x;
                x += Rat(1);
            }
            return r;
        }
        Rat x = h;
        for (long i = 0; i < -d; ++i) {
            x -= Rat(1);
            if (x.is_zero()) {
                pole = true;
                return std::nullopt;
            }
            r *= x;
        }
        return Rat(1) / r;
    }

    // Reduce to a plain rational. nullopt: not rational by pairing rules.
    std::optional<Rat> reduce() const {
        std::vector<Rat> num = gnum, den = gden;
        Rat c = coeff;
        bool zero = false, pole = false;
        // pair numerator/denominator entries whose difference is an integer
        std::vector<bool> consumed(num.size(), false);
        for (size_t i = 0; i < num.size(); ++i) {
            const Rat& g = num[i];
            for (auto it = den.begin(); it != den.end(); ++it) {
                Rat d = g - *it;
                if (!d.is_integer()) continue;
                if (g.is_nonpositive_integer() && it->is_nonpositive_integer()) {
                    // regularized pole/pole pair: (-1)^(p-q) q!/p!
                    c *= gamma_ratio_limit_exact(g, *it);
                } else {
                    bool p2 = false;
                    auto r = poch_ratio(*it, d.as_long(), p2);
                    if (p2) pole = true;
                    else if (r->is_zero()) zero = true;
                    else c *= *r;
                }
                consumed[i] = true;
                den.erase(it);
                break;
            }
        }
        std::vector<Rat> left;
        for (size_t i = 0; i < num.size(); ++i)
            if (!consumed[i]) left.push_back(num[i]);
        num = std::move(left);
        for (const auto& g : num) {
            if (!g.is_integer()) return std::nullopt;
            if (g.sign() <= 0) { pole = true; continue; }
            c *= rat_factorial(g.as_long() - 1);
        }
        for (const auto& g : den) {
            if (!g.is_integer()) return std::nullopt;
            if (g.sign() <= 0) { zero = true; continue; }
            c /= rat_factorial(g.as_long() - 1);
        }
        if (pole && zero) throw EvalError(EvalErrorCode::PoleClash, "exact pole times zero");
        if (pole) throw ExactPole{};
        if (zero) return Rat(0);
        return c;
    }
};

std::optional<Rat> exact_sin_pi(const Rat& v, bool cosine) {
    Rat w = v - Rat(2) * (v / Rat(2)).floor(); // v mod 2 in [0,2)
    if (cosine) {
        if (w == Rat(0)) return Rat(1);
        if (w == Rat(1)) return Rat(-1);
        if (w == Rat(1, 2) || w == Rat(3, 2)) return Rat(0);
        if (w == Rat(1, 3) || w == Rat(5, 3)) return Rat(1, 2);
        if (w == Rat(2, 3) || w == Rat(4, 3)) return Rat(-1, 2);
    } else {
        if (w == Rat(0) || w == Rat(1)) return Rat(0);
        if (w == Rat(1, 2)) return Rat(1);
        if (w == Rat(3, 2)) return Rat(-1);
        if (w == Rat(1, 6) || w == Rat(5, 6)) return Rat(1, 2);
        if (w == Rat(7, 6) || w == Rat(11, 6)) return Rat(-1, 2);
    }
    return std::nullopt;
}

// Matches r*pi for rational-valued r (given a binding); nullopt otherwise.
std::optional<Rat> pi_multiple(const ExprPtr& e, const std::map<std::string, Rat>& binding) {
    if (e->kind == ExprKind::Pi) return Rat(1);
    if (e->kind != ExprKind::Mul) return std::nullopt;
    Rat r(1);
    int pis = 0;
    for (const auto& k : e->kids) {
        if (k->kind == ExprKind::Pi) {
            ++pis;
        } else if (auto f = as_linform(k)) {
            r *= f->eval(binding);
        } else {
            return std::nullopt;
        }
    }
    if (pis != 1) return std::nullopt;
    return r;
}

class ExactEval {
public:
    explicit ExactEval(const std::map<std::string, Rat>& binding) : binding_(binding) {}

    std::optional<GProd> eval(const ExprPtr& e) {
        switch (e->kind) {
            case ExprKind::RatLit: return GProd::of(e->rat);
            case ExprKind::Sym: return GProd::of(e->form.eval(binding_));
            case ExprKind::Neg1Pow: {
                Rat v = e->form.eval(binding_);
                if (!v.is_integer())
                    throw EvalError(EvalErrorCode::NonIntegerNeg1Pow,
                                    "(-1)^x at non-integer value " + v.str());
                return GProd::of((v.num() % 2) == 0 ? Rat(1) : Rat(-1));
            }
            case ExprKind::Gamma: {
                auto a = eval_rat(e->kids[0]);
                if (!a) return std::nullopt;
                GProd g;
                g.gnum.push_back(*a);
                return g;
            }
            case ExprKind::Pi:
            case ExprKind::EulerGamma:
            case ExprKind::CatalanG:
            case ExprKind::Polygamma:
            case ExprKind::Ln:
            case ExprKind::Arctanh:
            case ExprKind::Sqrt: return std::nullopt;
            case ExprKind::Hyp: {
                auto v = detail::eval_hyp_exact(e->hyp, binding_);
                if (!v) return std::nullopt;
                return GProd::of(*v);
            }
            case ExprKind::Sin:
            case ExprKind::Cos: {
                auto m = pi_multiple(e->kids[0], binding_);
                if (!m) return std::nullopt;
                auto v = exact_sin_pi(*m, e->kind == ExprKind::Cos);
                if (!v) return std::nullopt;
                return GProd::of(*v);
            }
            case ExprKind::Pow: {
                auto ex = eval_rat(e->kids[1]);
                if (!ex || !ex->is_integer()) return std::nullopt;
                auto b = eval_rat(e->kids[0]);
                if (!b) return std::nullopt;
                if (b->is_zero() && ex->sign() < 0)
                    throw EvalError(EvalErrorCode::DivByZero, "0^negative");
                return GProd::of(b->pow_int(ex->as_long()));
            }
            case ExprKind::Binom: {
                auto n = eval_rat(e->kids[0]);
                auto k = eval_rat(e->kids[1]);
                if (!n || !k || !k->is_integer()) return std::nullopt;
                long kk = k->as_long();
                if (kk < 0) return GProd::of(Rat(0));
                Rat r(1);
                Rat x = *n - *k + Rat(1);
                for (long i = 0; i < kk; ++i) {
                    r *= x;
                    x += Rat(1);
                }
                return GProd::of(r / rat_factorial(kk));
            }
            case ExprKind::Pochhammer: {
                auto x = eval_rat(e->kids[0]);
                auto m = eval_rat(e->kids[1]);
                if (!x || !m || !m->is_integer()) return std::nullopt;
                long mm = m->as_long();
                bool pole = false;
                auto r = GProd::poch_ratio(*x, mm, pole);
                if (pole) throw ExactPole{};
                return GProd::of(*r);
            }
            case ExprKind::Sum: {
                Rat lo = e->lower.eval(binding_);
                if (e->upper_infinite) return std::nullopt;
                Rat hi = e->upper.eval(binding_);
                if (!lo.is_integer() || !hi.is_integer())
                    throw EvalError(EvalErrorCode::BadArgument, "non-integer sum bounds");
                Rat acc(0);
                auto saved = binding_;
                for (Rat k = lo; k <= hi; k += Rat(1)) {
                    binding_[e->index] = k;
                    std::optional<Rat> term;
                    try {
                        auto g = eval(e->kids[0]);
                        if (!g) { binding_ = saved; return std::nullopt; }
                        term = g->reduce();
                    } catch (const ExactPole&) {
                        binding_ = saved;
                        throw EvalError(EvalErrorCode::Pole, "pole inside exact sum term");
                    }
                    if (!term) { binding_ = saved; return std::nullopt; }
                    acc += *term;
                }
                binding_ = saved;
                return GProd::of(acc);
            }
            case ExprKind::Add: {
                Rat acc(0);
                for (const auto& k : e->kids) {
                    auto g = eval(k);
                    if (!g) return std::nullopt;
                    auto r = g->reduce();
                    if (!r) return std::nullopt;
                    acc += *r;
                }
                return GProd::of(acc);
            }
            case ExprKind::Mul: {
                GProd acc = GProd::of(Rat(1));
                for (const auto& k : e->kids) {
                    auto g = eval(k);
                    if (!g) return std::nullopt;
                    acc *= *g;
                }
                return acc;
            }
            case ExprKind::Div: {
                auto a = eval(e->kids[0]);
                auto b = eval(e->kids[1]);
                if (!a || !b) return std::nullopt;
                *a *= b->inverse();
                return a;
            }
        }
        return std::nullopt;
    }

    std::optional<Rat> eval_rat(const ExprPtr& e) {
        auto g = eval(e);
        if (!g) return std::nullopt;
        return g->reduce();
    }

private:
    std::map<std::string, Rat> binding_;
};

} // namespace

std::optional<Rat> eval_exact(const ExprPtr& e, const std::map<std::string, Rat>& binding) {
    ExactEval ev(binding);
    try {
        return ev.eval_rat(e);
    } catch (const ExactPole&) {
        throw EvalError(EvalErrorCode::Pole, "exact evaluation hit an uncancelled pole");
    }
}

// ---------------------------------------------------------------------------
// Numeric evaluation with pole propagation.
// ---------------------------------------------------------------------------

namespace {

class NumEval {
public:
    explicit NumEval(const EvalContext& ctx) : ctx_(ctx), wd_(ctx.digits + 10) {}

    EvalValue eval(const ExprPtr& e) {
        switch (e->kind) {
            case ExprKind::RatLit: return fin(BigFloat::from_rat(e->rat, wd_));
            case ExprKind::Pi: return fin(BigFloat::pi(wd_));
            case ExprKind::EulerGamma: return fin(BigFloat::euler(wd_));
            case ExprKind::CatalanG: return fin(BigFloat::catalan(wd_));
            case ExprKind::Sym: return fin(BigFloat::from_rat(e->form.eval(ctx_.binding), wd_));
            case ExprKind::Neg1Pow: {
                Rat v = e->form.eval(ctx_.binding);
                if (!v.is_integer())
                    throw EvalError(EvalErrorCode::NonIntegerNeg1Pow,
                                    "(-1)^x at non-integer value " + v.str());
                return fin(BigFloat::from_long((v.num() % 2) == 0 ? 1 : -1, wd_));
            }
            case ExprKind::Gamma: {
                auto [val, exact] = arg_value(e->kids[0]);
                if (exact && exact->is_nonpositive_integer()) return EvalValue::make_pole(wd_);
                return fin(gamma_bf(val));
            }
            case ExprKind::Polygamma: {
                auto [val, exact] = arg_value(e->kids[0]);
                if (exact && exact->is_nonpositive_integer()) return EvalValue::make_pole(wd_);
                if (e->order == 0) return fin(digamma_bf(val));
                return fin(polygamma_bf(e->order, val, ctx_.digits));
            }
            case ExprKind::Sin:
            case ExprKind::Cos: {
                bool cosine = e->kind == ExprKind::Cos;
                if (auto m = pi_multiple(e->kids[0], ctx_.binding)) {
                    if (auto ex = exact_sin_pi(*m, cosine))
                        return fin(BigFloat::from_rat(*ex, wd_));
                    BigFloat arg = BigFloat::from_rat(*m, wd_) * BigFloat::pi(wd_);
                    return fin(cosine ? arg.cos() : arg.sin());
                }
                BigFloat a = scalar(e->kids[0]);
                return fin(cosine ? a.cos() : a.sin());
            }
            case ExprKind::Ln: {
                BigFloat a = scalar(e->kids[0]);
                if (a.sign() <= 0)
                    throw EvalError(EvalErrorCode::BadArgument, "ln of a nonpositive value");
                return fin(a.ln());
            }
            case ExprKind::Sqrt: {
                BigFloat a = scalar(e->kids[0]);
                if (a.sign() < 0)
                    throw EvalError(EvalErrorCode::BadArgument, "sqrt of a negative value");
                return fin(a.sqrt());
            }
            case ExprKind::Arctanh: return fin(scalar(e->kids[0]).atanh());
            case ExprKind::Pow: {
                auto ex = try_exact(e->kids[1]);
                BigFloat base = scalar(e->kids[0]);
                if (ex && ex->is_integer()) {
                    if (base.is_zero() && ex->sign() < 0)
                        throw EvalError(EvalErrorCode::DivByZero, "0^negative");
                    return fin(base.pow_long(ex->as_long()));
                }
                BigFloat p = scalar(e->kids[1]);
                if (base.sign() < 0)
                    throw EvalError(EvalErrorCode::BadArgument,
                                    "negative base with non-integer exponent");
                if (base.is_zero()) {
                    if (p.sign() <= 0)
                        throw EvalError(EvalErrorCode::DivByZero, "0^nonpositive");
                    return fin(BigFloat(wd_));
                }
                return fin(base.pow(p));
            }
            case ExprKind::Binom: {
                // Gamma(n+1) / (Gamma(k+1) Gamma(n-k+1)) with pole handling
                auto n = e->kids[0];
                auto k = e->kids[1];
                auto one = lit(1);
                return eval(divf(gammaf(add(n, one)),
                                 mul(gammaf(add(k, one)), gammaf(sub(add(n, one), k)))));
            }
            case ExprKind::Pochhammer: {
                auto m = try_exact(e->kids[1]);
                if (m && m->is_integer()) {
                    long mm = m->as_long();
                    BigFloat x = scalar(e->kids[0]);
                    BigFloat r = BigFloat::from_long(1, wd_);
                    BigFloat one = BigFloat::from_long(1, wd_);
                    if (mm >= 0) {
                        for (long i = 0; i < mm; ++i) {
                            r *= x;
                            x += one;
                        }
                        return fin(r);
                    }
                    for (long i = 0; i < -mm; ++i) {
                        x -= one;
                        if (x.is_zero()) return EvalValue::make_pole(wd_);
                        r *= x;
                    }
                    return fin(one / r);
                }
                return eval(divf(gammaf(add(e->kids[0], e->kids[1])), gammaf(e->kids[0])));
            }
            case ExprKind::Sum: return eval_sum(e);
            case ExprKind::Hyp: return detail::eval_hyp_node(e->hyp, ctx_);
            case ExprKind::Add: {
                BigFloat acc(wd_);
                bool pole = false;
                for (const auto& k : e->kids) {
                    EvalValue v = eval(k);
                    if (v.pole) pole = true;
                    else acc += v.v;
                }
                if (pole) return EvalValue::make_pole(wd_);
                return fin(acc);
            }
            case ExprKind::Mul: {
                BigFloat acc = BigFloat::from_long(1, wd_);
                int poles = 0;
                bool zero = false;
                for (const auto& k : e->kids) {
                    EvalValue v = eval(k);
                    if (v.pole) ++poles;
                    else {
                        if (v.v.is_zero()) zero = true;
                        acc *= v.v;
                    }
                }
                if (poles > 0 && zero)
                    throw EvalError(EvalErrorCode::PoleClash, "pole multiplied by zero");
                if (poles > 0) return EvalValue::make_pole(wd_);
                return fin(acc);
            }
            case ExprKind::Div: {
                EvalValue a = eval(e->kids[0]);
                EvalValue b = eval(e->kids[1]);
                if (a.pole && b.pole)
                    throw EvalError(EvalErrorCode::PoleClash, "pole divided by pole");
                if (b.pole) return fin(BigFloat(wd_)); // finite/pole = 0
                if (a.pole) {
                    if (b.v.is_zero())
                        throw EvalError(EvalErrorCode::PoleClash, "pole divided by zero");
                    return EvalValue::make_pole(wd_);
                }
                if (b.v.is_zero())
                    throw EvalError(EvalErrorCode::DivByZero, "division by zero");
                return fin(a.v / b.v);
            }
        }
        throw EvalError(EvalErrorCode::BadArgument, "unhandled node");
    }

private:
    EvalValue fin(BigFloat x) { return EvalValue::finite(std::move(x)); }

    std::optional<Rat> try_exact(const ExprPtr& e) {
        if (auto f = as_linform(e)) return f->eval(ctx_.binding);
        try {
            return eval_exact(e, ctx_.binding);
        } catch (const EvalError&) {
            return std::nullopt;
        }
    }

    // (numeric value, exact rational when available)
    std::pair<BigFloat, std::optional<Rat>> arg_value(const ExprPtr& e) {
        if (auto r = try_exact(e)) return {BigFloat::from_rat(*r, wd_), r};
        return {scalar(e), std::nullopt};
    }

    BigFloat scalar(const ExprPtr& e) {
        EvalValue v = eval(e);
        if (v.pole) throw EvalError(EvalErrorCode::Pole, "pole where a finite value is needed");
        return v.v;
    }

    EvalValue eval_sum(const ExprPtr& e) {
        Rat lo = e->lower.eval(ctx_.binding);
        if (!lo.is_integer())
            throw EvalError(EvalErrorCode::BadArgument, "non-integer sum lower bound");
        auto saved = ctx_.binding;
        BigFloat acc(wd_);
        auto term_at = [&](const Rat& k) {
            ctx_.binding[e->index] = k;
            EvalValue v = eval(e->kids[0]);
            if (v.pole)
                throw EvalError(EvalErrorCode::Pole, "pole in sum term at index " + k.str());
            return v.v;
        };
        if (!e->upper_infinite) {
            Rat hi = e->upper.eval(ctx_.binding);
            if (!hi.is_integer())
                throw EvalError(EvalErrorCode::BadArgument, "non-integer sum upper bound");
            for (Rat k = lo; k <= hi; k += Rat(1)) acc += term_at(k);
            ctx_.binding = saved;
            return fin(acc);
        }
        // adaptive infinite summation lives in the tail engine
        BigFloat total = detail::eval_infinite_sum(e->index, lo, e->kids[0], ctx_);
        ctx_.binding = saved;
        return fin(total);
    }

    EvalContext ctx_;
    int wd_;
};

} // namespace

EvalValue eval_value(const ExprPtr& e, const EvalContext& ctx) {
    NumEval ev(ctx);
    return ev.eval(e);
}

BigFloat eval_expr(const ExprPtr& e, const EvalContext& ctx) {
    EvalValue v = eval_value(e, ctx);
    if (v.pole) {
        if (ctx.pole_policy == PolePolicy::Error)
            throw EvalError(EvalErrorCode::Pole, "expression has a Gamma-type pole at the binding");
        BigFloat inf(ctx.digits);
        mpfr_set_inf(inf.raw(), 1);
        return inf;
    }
    return v.v;
}

} // namespace hyp
