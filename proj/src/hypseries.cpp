#include "hyp/hypseries.hpp"
#include "hyp/detail_hypeval.hpp"

#include <algorithm>
#include <cmath>

namespace hyp {

LinForm parametric_excess(const HypSpec& spec) {
    LinForm s;
    for (const auto& b : spec.bottoms) s = s + b;
    for (const auto& t : spec.tops) s = s - t;
    return s;
}

SeriesClass classify(const HypSpec& spec, const std::map<std::string, Rat>& binding) {
    SeriesClass c;
    c.excess = parametric_excess(spec);
    c.excess_value = c.excess.eval(binding);

    std::optional<long> term_n; // smallest n with top value -n
    for (const auto& t : spec.tops) {
        Rat v = t.eval(binding);
        if (v.is_nonpositive_integer()) {
            long n = -v.as_long();
            if (!term_n || n < *term_n) term_n = n;
        }
    }
    std::optional<long> bottom_m; // smallest m with bottom value -m
    for (const auto& b : spec.bottoms) {
        Rat v = b.eval(binding);
        if (v.is_nonpositive_integer()) {
            long m = -v.as_long();
            if (!bottom_m || m < *bottom_m) bottom_m = m;
        }
    }
    if (term_n) {
        if (bottom_m && *bottom_m < *term_n) {
            c.kind = SeriesKind::Degenerate;
            return c;
        }
        c.kind = SeriesKind::Terminating;
        c.length = *term_n + 1;
        return c;
    }
    if (bottom_m) {
        c.kind = SeriesKind::Degenerate;
        return c;
    }
    c.kind = c.excess_value > Rat(0) ? SeriesKind::Convergent : SeriesKind::Divergent;
    return c;
}

Rat sum_terminating_exact(const HypSpec& spec, const std::map<std::string, Rat>& binding) {
    SeriesClass cls = classify(spec, binding);
    if (cls.kind == SeriesKind::Degenerate)
        throw EvalError(EvalErrorCode::DegenerateSeries,
                        "bottom parameter pole before termination: " + spec.str());
    if (cls.kind != SeriesKind::Terminating)
        throw EvalError(EvalErrorCode::BadArgument, "series does not terminate: " + spec.str());
    std::vector<Rat> tops, bottoms;
    for (const auto& t : spec.tops) tops.push_back(t.eval(binding));
    for (const auto& b : spec.bottoms) bottoms.push_back(b.eval(binding));
    Rat acc(0), term(1);
    for (long k = 0;; ++k) {
        acc += term;
        if (k + 1 >= cls.length) break;
        Rat num(1), den(Rat(k + 1));
        for (auto& t : tops) { num *= t; t += Rat(1); }
        for (auto& b : bottoms) { den *= b; b += Rat(1); }
        term = term * num / den;
    }
    return acc;
}

namespace {

// Coefficients of the asymptotic expansion  u_k ~ sum_j c_j k^(-(1+sigma)-j)
// of the series term, c_0 = 1, obtained from the term recurrence
// u_{k+1} Q(k) = u_k P(k) with P = prod(k+top), Q = (k+1) prod(k+bottom).
std::vector<Rat> tail_coefficients(const std::vector<Rat>& tops, const std::vector<Rat>& bottoms,
                                   const Rat& sigma, int count) {
    size_t deg = tops.size();
    // elementary symmetric polynomial coefficients: P(k) = sum_l p_l k^(deg-l)
    auto poly_coeffs = [deg](const std::vector<Rat>& roots) {
        std::vector<Rat> c(deg + 1, Rat(0));
        c[0] = Rat(1);
        size_t used = 0;
        for (const auto& r : roots) {
            ++used;
            for (size_t l = used; l >= 1; --l) c[l] += r * c[l - 1];
        }
        return c;
    };
    std::vector<Rat> p = poly_coeffs(tops);
    std::vector<Rat> qroots = bottoms;
    qroots.push_back(Rat(1));
    std::vector<Rat> q = poly_coeffs(qroots);

    Rat st = sigma + Rat(1); // decay exponent
    auto gbinom = [](const Rat& x, long i) {
        Rat r(1);
        for (long t = 0; t < i; ++t) r *= (x - Rat(t));
        mpz_class f;
        mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(i));
        return r / Rat(f);
    };

    std::vector<Rat> c{Rat(1)};
    for (int m = 2; static_cast<int>(c.size()) < count; ++m) {
        // E_m: sum over j<=m of terms; c_m cancels, c_{m-1} carries (1-m)
        Rat rhs(0);
        for (int j = 0; j <= m - 2; ++j) {
            Rat lhsj(0);
            for (int i = 0; i + j <= m; ++i) {
                int l = m - j - i;
                if (l < 0 || l > static_cast<int>(deg)) continue;
                lhsj += gbinom(-st - Rat(j), i) * q[static_cast<size_t>(l)];
            }
            Rat pj = (m - j) <= static_cast<int>(deg) ? p[static_cast<size_t>(m - j)] : Rat(0);
            rhs += c[static_cast<size_t>(j)] * (lhsj - pj);
        }
        // contribution of c_{m-1} beyond the (1-m) factor is already folded in:
        // include its i+l parts except the cancelling leading ones
        {
            int j = m - 1;
            Rat lhsj(0);
            for (int i = 0; i + j <= m; ++i) {
                int l = m - j - i;
                if (l < 0 || l > static_cast<int>(deg)) continue;
                lhsj += gbinom(-st - Rat(j), i) * q[static_cast<size_t>(l)];
            }
            Rat pj = (m - j) <= static_cast<int>(deg) ? p[static_cast<size_t>(m - j)] : Rat(0);
            // lhsj - pj = (1-m) analytically; solve for c_{m-1} from the rest
            Rat coef = lhsj - pj;
            if (coef.is_zero())
                throw EvalError(EvalErrorCode::BadArgument, "degenerate tail recurrence");
            c.push_back(-rhs / coef);
        }
    }
    return c;
}

struct TermIter {
    std::vector<Rat> tops, bottoms;
    BigFloat term;
    long k = 0;
    int wd;

    TermIter(const HypSpec& spec, const std::map<std::string, Rat>& binding, int wd_)
        : wd(wd_) {
        for (const auto& t : spec.tops) tops.push_back(t.eval(binding));
        for (const auto& b : spec.bottoms) bottoms.push_back(b.eval(binding));
        term = BigFloat::from_long(1, wd);
    }
    void advance() {
        Rat num(1), den(Rat(k + 1));
        for (auto& t : tops) { num *= t; t += Rat(1); }
        for (auto& b : bottoms) { den *= b; b += Rat(1); }
        term *= BigFloat::from_rat(num, wd);
        term /= BigFloat::from_rat(den, wd);
        ++k;
    }
};

double max_param_abs(const HypSpec& spec, const std::map<std::string, Rat>& binding) {
    double m = 1.0;
    for (const auto& t : spec.tops) m = std::max(m, std::fabs(t.eval(binding).raw().get_d()));
    for (const auto& b : spec.bottoms) m = std::max(m, std::fabs(b.eval(binding).raw().get_d()));
    return m;
}

BigFloat zeta_tail_sum(const HypSpec& spec, const std::map<std::string, Rat>& binding,
                       const Rat& sigma, int precision) {
    int wd = precision + 12;
    BigFloat eps = BigFloat::eps(precision + 6, wd);
    std::vector<Rat> tops, bottoms;
    for (const auto& t : spec.tops) tops.push_back(t.eval(binding));
    for (const auto& b : spec.bottoms) bottoms.push_back(b.eval(binding));

    const int J = 40;
    std::vector<Rat> coeff = tail_coefficients(tops, bottoms, sigma, J);
    BigFloat st = BigFloat::from_rat(sigma + Rat(1), wd);

    // t_k -> C * k^{-1-sigma} with C = prod Gamma(bottom) / prod Gamma(top)
    // (the k! bottom contributes Gamma(1) = 1)
    BigFloat cpref = BigFloat::from_long(1, wd);
    for (const auto& b : bottoms) cpref *= gamma_bf(BigFloat::from_rat(b, wd));
    for (const auto& t : tops) cpref /= gamma_bf(BigFloat::from_rat(t, wd));

    long N = std::max<long>({64, static_cast<long>(2.0 * max_param_abs(spec, binding)) + 16,
                             6L * (precision + 6)});
    auto eval_at = [&](long n) {
        TermIter it(spec, binding, wd);
        BigFloat direct(wd);
        for (long k = 0; k < n; ++k) {
            direct += it.term;
            it.advance();
        }
        BigFloat tail(wd);
        BigFloat nb = BigFloat::from_long(n, wd);
        for (int j = 0; j < J; ++j) {
            BigFloat zj = hurwitz_zeta(st + BigFloat::from_long(j, wd), nb, precision + 6);
            tail += BigFloat::from_rat(coeff[static_cast<size_t>(j)], wd) * zj;
        }
        return direct + cpref * tail;
    };
    for (int attempt = 0; attempt < 8; ++attempt) {
        BigFloat v1 = eval_at(N);
        BigFloat v2 = eval_at(2 * N);
        BigFloat scale = v2.abs();
        BigFloat one = BigFloat::from_long(1, wd);
        if (scale < one) scale = one;
        if ((v1 - v2).abs() <= eps * scale * BigFloat::from_long(4, wd)) return v2;
        N *= 2;
    }
    throw EvalError(EvalErrorCode::TooSlow, "series tail did not certify: " + spec.str());
}

} // namespace

BigFloat sum_convergent(const HypSpec& spec, const std::map<std::string, Rat>& binding,
                        int precision, const Rat& sigma_min) {
    SeriesClass cls = classify(spec, binding);
    switch (cls.kind) {
        case SeriesKind::Terminating:
            return BigFloat::from_rat(sum_terminating_exact(spec, binding), precision + 10);
        case SeriesKind::Degenerate:
            throw EvalError(EvalErrorCode::DegenerateSeries, "degenerate series: " + spec.str());
        case SeriesKind::Divergent:
            throw EvalError(EvalErrorCode::DivergentSeries, "divergent series: " + spec.str());
        case SeriesKind::Convergent: break;
    }
    if (cls.excess_value < sigma_min)
        throw EvalError(EvalErrorCode::ExcessTooSmall,
                        "parametric excess " + cls.excess_value.str() + " below threshold " +
                            sigma_min.str() + ": " + spec.str());
    return zeta_tail_sum(spec, binding, cls.excess_value, precision);
}

BigFloat sum_direct(const HypSpec& spec, const std::map<std::string, Rat>& binding, int precision,
                    long max_terms) {
    SeriesClass cls = classify(spec, binding);
    if (cls.kind == SeriesKind::Terminating)
        return BigFloat::from_rat(sum_terminating_exact(spec, binding), precision + 10);
    if (cls.kind != SeriesKind::Convergent)
        throw EvalError(EvalErrorCode::DivergentSeries, "series does not converge: " + spec.str());
    int wd = precision + 10;
    BigFloat eps = BigFloat::eps(precision + 4, wd);
    BigFloat sigma = BigFloat::from_rat(cls.excess_value, wd);
    double M = max_param_abs(spec, binding);
    long min_n = static_cast<long>(4 * M * M) + 32;
    TermIter it(spec, binding, wd);
    BigFloat acc(wd);
    for (long k = 0; k < max_terms; ++k) {
        acc += it.term;
        if (k > min_n) {
            BigFloat scale = acc.abs();
            BigFloat one = BigFloat::from_long(1, wd);
            if (scale < one) scale = one;
            BigFloat bound =
                it.term.abs() * BigFloat::from_long(k, wd) / sigma * BigFloat::from_long(20, wd);
            if (bound < eps * scale) return acc;
        }
        it.advance();
    }
    throw EvalError(EvalErrorCode::TooSlow, "direct summation exceeded term budget: " + spec.str());
}

std::pair<ExprPtr, HypSpec> reverse_terminating(const HypSpec& spec, const std::string& n_symbol) {
    if (spec.tops.size() != 3 || spec.bottoms.size() != 2)
        throw EvalError(EvalErrorCode::BadArgument, "reversal needs a 3F2 spec");
    LinForm neg_n = LinForm::symbol(n_symbol, Rat(-1));
    size_t pos = spec.tops.size();
    for (size_t i = 0; i < spec.tops.size(); ++i)
        if (spec.tops[i] == neg_n) { pos = i; break; }
    if (pos == spec.tops.size())
        throw EvalError(EvalErrorCode::BadArgument,
                        "no top parameter equal to -" + n_symbol + " in " + spec.str());
    std::vector<LinForm> rest;
    for (size_t i = 0; i < spec.tops.size(); ++i)
        if (i != pos) rest.push_back(spec.tops[i]);
    const LinForm& a = rest[0];
    const LinForm& b = rest[1];
    const LinForm& d = spec.bottoms[0];
    const LinForm& e = spec.bottoms[1];
    LinForm one(Rat(1));
    LinForm n = LinForm::symbol(n_symbol);
    HypSpec image({neg_n, one - d - n, one - e - n}, {one - b - n, one - a - n});
    ExprPtr nsym = sym(n);
    ExprPtr pref = mul({neg1pow(n), pochhammer(sym(a), nsym), pochhammer(sym(b), nsym)});
    pref = divf(pref, mul(pochhammer(sym(d), nsym), pochhammer(sym(e), nsym)));
    return {pref, image};
}

namespace detail {

EvalValue eval_hyp_node(const HypSpec& spec, const EvalContext& ctx) {
    SeriesClass cls = classify(spec, ctx.binding);
    switch (cls.kind) {
        case SeriesKind::Terminating:
            return EvalValue::finite(
                BigFloat::from_rat(sum_terminating_exact(spec, ctx.binding), ctx.digits + 10));
        case SeriesKind::Convergent:
            if (ctx.oracle_direct)
                return EvalValue::finite(sum_direct(spec, ctx.binding, ctx.digits));
            return EvalValue::finite(
                sum_convergent(spec, ctx.binding, ctx.digits, ctx.sigma_min));
        case SeriesKind::Degenerate:
            throw EvalError(EvalErrorCode::DegenerateSeries, "degenerate series: " + spec.str());
        case SeriesKind::Divergent:
            throw EvalError(EvalErrorCode::DivergentSeries, "divergent series: " + spec.str());
    }
    throw EvalError(EvalErrorCode::BadArgument, "unreachable");
}

std::optional<Rat> eval_hyp_exact(const HypSpec& spec, const std::map<std::string, Rat>& binding) {
    SeriesClass cls = classify(spec, binding);
    if (cls.kind == SeriesKind::Terminating) return sum_terminating_exact(spec, binding);
    if (cls.kind == SeriesKind::Degenerate)
        throw EvalError(EvalErrorCode::DegenerateSeries, "degenerate series: " + spec.str());
    if (cls.kind == SeriesKind::Divergent)
        throw EvalError(EvalErrorCode::DivergentSeries, "divergent series: " + spec.str());
    return std::nullopt;
}

} // namespace detail

} // namespace hyp
