#include "hyp/detail_infsum.hpp"
#include <cstdlib>
#include <cstdio>

#include <algorithm>
#include <numeric>

namespace hyp::detail {

namespace {

const Rat& bern(int n) { return bernoulli(n); }

Rat rat_fact(long n) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
    return Rat(f);
}

// ---------------------------------------------------------------------------
// dense polynomials over Rat, ascending coefficients
// ---------------------------------------------------------------------------

using Poly = std::vector<Rat>;

Poly poly_one() { return {Rat(1)}; }

Poly poly_mul(const Poly& a, const Poly& b) {
    Poly r(a.size() + b.size() - 1, Rat(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

// p(k + 1)
Poly poly_shift(const Poly& p) {
    Poly r(p.size(), Rat(0));
    for (size_t i = 0; i < p.size(); ++i) {
        // expand (k+1)^i
        Rat binom(1);
        for (size_t j = 0; j <= i; ++j) {
            r[j] += p[i] * binom;
            binom = binom * Rat(static_cast<long>(i - j)) / Rat(static_cast<long>(j + 1));
        }
    }
    return r;
}

// affine form c0 + c1*k as a Poly
Poly poly_affine(const Rat& c0, const Rat& c1) {
    if (c1.is_zero()) return {c0};
    return {c0, c1};
}

// ---------------------------------------------------------------------------
// structural decomposition of one product piece
// ---------------------------------------------------------------------------

struct PieceShape {
    Rat rho = Rat(1);          // constant per-step factor
    Poly pnum = poly_one();    // ratio numerator polynomial in k
    Poly pden = poly_one();    // ratio denominator polynomial in k
    bool has_psi = false;
    long psi_delta = 0;        // psi(delta*k + off)
    Rat psi_off;
    ExprPtr term;              // the piece itself, for numeric evaluation
};

bool mentions(const ExprPtr& e, const std::string& sym) {
    std::vector<std::string> syms;
    collect_symbols(e, syms);
    return std::find(syms.begin(), syms.end(), sym) != syms.end();
}

struct DecomposeError {};

// Appends the per-step ratio contribution of one factor; side +1 numerator.
void classify_factor(const ExprPtr& f, const std::string& idx, int side, PieceShape& out,
                     const std::map<std::string, Rat>& binding) {
    if (!mentions(f, idx)) return; // constants cancel in the normalized tail

    auto affine_of = [&](const LinForm& L) -> std::pair<Rat, Rat> {
        Rat c1 = L.coeff(idx);
        LinForm rest = L - LinForm::symbol(idx, c1);
        return {rest.eval(binding), c1};
    };

    auto add_ratio = [&](const Poly& num, const Poly& den) {
        if (side > 0) {
            out.pnum = poly_mul(out.pnum, num);
            out.pden = poly_mul(out.pden, den);
        } else {
            out.pnum = poly_mul(out.pnum, den);
            out.pden = poly_mul(out.pden, num);
        }
    };

    switch (f->kind) {
        case ExprKind::Sym: {
            auto [c0, c1] = affine_of(f->form);
            Poly L = poly_affine(c0, c1);
            add_ratio(poly_shift(L), L);
            return;
        }
        case ExprKind::Gamma: {
            auto arg = as_linform(f->kids[0]);
            if (!arg) throw DecomposeError{};
            auto [c0, c1] = affine_of(*arg);
            if (!c1.is_integer()) throw DecomposeError{};
            long q = c1.as_long();
            if (q == 0) return;
            if (q > 0) {
                // Gamma(qk+q+x)/Gamma(qk+x) = prod_{i=0..q-1} (qk+x+i)
                Poly prod = poly_one();
                for (long i = 0; i < q; ++i)
                    prod = poly_mul(prod, poly_affine(c0 + Rat(i), Rat(q)));
                add_ratio(prod, poly_one());
            } else {
                // Gamma(z-|q|)/Gamma(z), z = x+qk: 1/prod_{i=1..|q|} (z-i)
                Poly prod = poly_one();
                for (long i = 1; i <= -q; ++i)
                    prod = poly_mul(prod, poly_affine(c0 - Rat(i), Rat(q)));
                add_ratio(poly_one(), prod);
            }
            return;
        }
        case ExprKind::Pochhammer: {
            // (x)_L = Gamma(x+L)/Gamma(x); x index-free
            if (mentions(f->kids[0], idx)) throw DecomposeError{};
            auto arg = as_linform(f->kids[1]);
            auto base = as_linform(f->kids[0]);
            if (!arg || !base) throw DecomposeError{};
            classify_factor(gammaf(sym(*base + *arg)), idx, side, out, binding);
            return;
        }
        case ExprKind::Binom: {
            // binom(n,L) = Gamma(n+1)/(Gamma(L+1) Gamma(n-L+1))
            auto n = as_linform(f->kids[0]);
            auto l = as_linform(f->kids[1]);
            if (!n || !l) throw DecomposeError{};
            LinForm one(Rat(1));
            classify_factor(gammaf(sym(*n + one)), idx, side, out, binding);
            classify_factor(gammaf(sym(*l + one)), idx, -side, out, binding);
            classify_factor(gammaf(sym(*n - *l + one)), idx, -side, out, binding);
            return;
        }
        case ExprKind::Neg1Pow: {
            auto [c0, c1] = affine_of(f->form);
            (void)c0;
            if (!c1.is_integer()) throw DecomposeError{};
            if (c1.as_long() % 2 != 0) out.rho = -out.rho;
            return;
        }
        case ExprKind::Pow: {
            // r^{affine}: constant rational base
            if (!mentions(f->kids[1], idx)) {
                // f(k)^m with integer exponent
                auto m = as_linform(f->kids[1]);
                if (!m || !m->is_constant() || !m->constant().is_integer())
                    throw DecomposeError{};
                long e = m->constant().as_long();
                int s2 = e < 0 ? -side : side;
                for (long i = 0; i < std::labs(e); ++i)
                    classify_factor(f->kids[0], idx, s2, out, binding);
                return;
            }
            auto base = as_linform(f->kids[0]);
            auto expo = as_linform(f->kids[1]);
            if (!base || !expo || !base->is_constant() || mentions(f->kids[0], idx))
                throw DecomposeError{};
            auto [c0, c1] = affine_of(*expo);
            (void)c0;
            if (!c1.is_integer()) throw DecomposeError{};
            Rat r = base->constant().pow_int(side > 0 ? c1.as_long() : -c1.as_long());
            out.rho *= r;
            return;
        }
        case ExprKind::Polygamma: {
            if (f->order != 0) throw DecomposeError{};
            auto arg = as_linform(f->kids[0]);
            if (!arg) throw DecomposeError{};
            auto [c0, c1] = affine_of(*arg);
            if (!c1.is_integer() || c1.sign() <= 0 || side < 0 || out.has_psi)
                throw DecomposeError{};
            out.has_psi = true;
            out.psi_delta = c1.as_long();
            out.psi_off = c0;
            return;
        }
        case ExprKind::Mul:
            for (const auto& kf : f->kids) classify_factor(kf, idx, side, out, binding);
            return;
        case ExprKind::Div:
            classify_factor(f->kids[0], idx, side, out, binding);
            classify_factor(f->kids[1], idx, -side, out, binding);
            return;
        default: throw DecomposeError{};
    }
}

// Distributes sums so each piece is a pure product.
void explode(const ExprPtr& e, std::vector<ExprPtr>& out) {
    if (e->kind == ExprKind::Add) {
        for (const auto& k : e->kids) explode(k, out);
        return;
    }
    if (e->kind == ExprKind::Mul) {
        // distribute over at most one Add child (psi-combinations)
        for (size_t i = 0; i < e->kids.size(); ++i) {
            if (e->kids[i]->kind == ExprKind::Add) {
                for (const auto& term : e->kids[i]->kids) {
                    std::vector<ExprPtr> kids = e->kids;
                    kids[i] = term;
                    explode(mul(std::move(kids)), out);
                }
                return;
            }
        }
        out.push_back(e);
        return;
    }
    if (e->kind == ExprKind::Div && e->kids[0]->kind == ExprKind::Add) {
        for (const auto& term : e->kids[0]->kids) out.push_back(divf(term, e->kids[1]));
        return;
    }
    out.push_back(e);
}

// Asymptotic coefficients c_j of t_k ~ k^{-s} sum_j c_j k^{-j} (c_0 = 1) from
// the normalized ratio polynomials.
std::vector<Rat> ratio_tail_coeffs(const Poly& pnum, const Poly& pden, const Rat& s, int count) {
    size_t deg = pnum.size() - 1;
    // descending normalized coefficient lists p[l] = coeff of k^{deg-l} / lead
    auto norm = [&](const Poly& p) {
        std::vector<Rat> v(deg + 1, Rat(0));
        Rat lead = p.back();
        for (size_t i = 0; i < p.size(); ++i) v[deg - i] = p[i] / lead;
        return v;
    };
    std::vector<Rat> p = norm(pnum), q = norm(pden);
    auto gbinom = [](const Rat& x, long i) {
        Rat r(1);
        for (long t = 0; t < i; ++t) r *= (x - Rat(t));
        return r / rat_fact(i);
    };
    std::vector<Rat> c{Rat(1)};
    for (int m = 2; static_cast<int>(c.size()) < count; ++m) {
        Rat rhs(0);
        Rat pivot(0);
        for (int j = 0; j <= m - 1; ++j) {
            Rat lhsj(0);
            for (int i = 0; i + j <= m; ++i) {
                int l = m - j - i;
                if (l < 0 || l > static_cast<int>(deg)) continue;
                lhsj += gbinom(-s - Rat(j), i) * q[static_cast<size_t>(l)];
            }
            Rat pj = (m - j) <= static_cast<int>(deg) ? p[static_cast<size_t>(m - j)] : Rat(0);
            if (j == m - 1) {
                pivot = lhsj - pj;
            } else {
                rhs += c[static_cast<size_t>(j)] * (lhsj - pj);
            }
        }
        if (pivot.is_zero())
            throw EvalError(EvalErrorCode::BadArgument, "degenerate series tail recurrence");
        c.push_back(-rhs / pivot);
    }
    return c;
}

// Exact expansion psi(delta k + x) = ln(delta) + ln k + sum_j w_j k^{-j}.
std::vector<Rat> psi_weight_coeffs(long delta, const Rat& x, int count) {
    std::vector<Rat> w(static_cast<size_t>(count), Rat(0)); // w[0] unused
    Rat xd = x / Rat(delta);
    // ln(1+x/(delta k)): sum (-1)^{m+1} (x/delta)^m / m k^{-m}
    Rat pw(1);
    for (int m = 1; m < count; ++m) {
        pw *= xd;
        w[static_cast<size_t>(m)] += Rat(m % 2 == 1 ? 1 : -1) / Rat(m) * pw;
    }
    // -1/(2z) and -sum B_{2i}/(2i) z^{-2i}, z = delta k (1 + x/(delta k))
    auto add_zpow = [&](int r, const Rat& coeff) {
        // coeff * z^{-r} = coeff delta^{-r} k^{-r} sum_i binom(-r,i) xd^i k^{-i}
        Rat base = coeff * Rat(delta).pow_int(-r);
        Rat xp(1);
        for (int i = 0; r + i < count; ++i) {
            Rat gb(1);
            for (int t = 0; t < i; ++t) gb *= (Rat(-r) - Rat(t));
            gb /= rat_fact(i);
            w[static_cast<size_t>(r + i)] += base * gb * xp;
            xp *= xd;
        }
    };
    add_zpow(1, Rat(-1, 2));
    for (int i = 1; 2 * i < count; ++i) add_zpow(2 * i, -bern(2 * i) / Rat(2 * i));
    return w;
}

struct ZetaPack {
    // sum_{k>=N} sgn^{k-N} k^{-s} and the ln k weighted version
    BigFloat plain, logw;
};

ZetaPack zeta_from(const Rat& s_rat, long n, int sign, int digits) {
    int wd = digits + 10;
    BigFloat s = BigFloat::from_rat(s_rat, wd);
    ZetaPack z;
    if (sign < 0 && s_rat == Rat(1)) {
        // sum (-1)^{k-N} / k = (psi((N+1)/2) - psi(N/2)) / 2
        BigFloat a0 = BigFloat::from_rat(Rat(n, 2), wd);
        BigFloat a1 = BigFloat::from_rat(Rat(n + 1, 2), wd);
        z.plain = (digamma_bf(a1) - digamma_bf(a0)) * BigFloat::from_rat(Rat(1, 2), wd);
        z.logw = BigFloat(wd);
        throw EvalError(EvalErrorCode::TooSlow,
                        "alternating log-weighted tail at exponent 1 is unsupported");
    }
    if (sign > 0) {
        z.plain = hurwitz_zeta(s, BigFloat::from_long(n, wd), digits);
        z.logw = -hurwitz_zeta_ds(s, BigFloat::from_long(n, wd), digits);
        return z;
    }
    // alternating: split k >= N into N+2m and N+1+2m
    BigFloat half = BigFloat::from_rat(Rat(1, 2), wd);
    BigFloat a0 = BigFloat::from_rat(Rat(n, 2), wd);
    BigFloat a1 = a0 + half;
    BigFloat p2 = BigFloat::from_long(2, wd).pow(-s);
    BigFloat z0 = hurwitz_zeta(s, a0, digits), z1 = hurwitz_zeta(s, a1, digits);
    BigFloat d0 = hurwitz_zeta_ds(s, a0, digits), d1 = hurwitz_zeta_ds(s, a1, digits);
    BigFloat ln2 = BigFloat::from_long(2, wd).ln();
    z.plain = p2 * (z0 - z1);
    z.logw = p2 * (ln2 * (z0 - z1) - (d0 - d1));
    return z;
}

} // namespace

BigFloat eval_infinite_sum(const std::string& index, const Rat& lo, const ExprPtr& body,
                           const EvalContext& ctx) {
    int wd = ctx.digits + 10;
    BigFloat eps = BigFloat::eps(ctx.digits + 5, wd);
    EvalContext local = ctx;

    auto term_at = [&](long k) {
        local.binding[index] = Rat(k);
        EvalValue v = eval_value(body, local);
        if (v.pole)
            throw EvalError(EvalErrorCode::Pole,
                            "pole in sum term at index " + std::to_string(k));
        return v.v;
    };

    long k0 = lo.as_long();
    // --- phase 1: direct summation with geometric certification ---
    BigFloat acc(wd);
    {
        BigFloat prev(wd);
        int zeros = 0;
        double worst_ratio = 0.0;
        int window = 0;
        const long direct_cap = 640;
        for (long k = k0; k < k0 + direct_cap; ++k) {
            BigFloat t = term_at(k);
            acc += t;
            if (t.is_zero()) {
                if (++zeros >= 96) return acc;
            } else {
                zeros = 0;
                if (!prev.is_zero()) {
                    double r = (t.abs() / prev.abs()).to_double();
                    worst_ratio = std::max(worst_ratio, r);
                    if (++window >= 10) {
                        if (worst_ratio < 0.9) {
                            BigFloat scale = acc.abs();
                            BigFloat one = BigFloat::from_long(1, wd);
                            if (scale < one) scale = one;
                            BigFloat bound = t.abs() * BigFloat::from_rat(
                                Rat(static_cast<long>(worst_ratio * 1000) + 1, 1000), wd);
                            bound = bound / (BigFloat::from_long(1, wd) -
                                             BigFloat::from_rat(
                                                 Rat(static_cast<long>(worst_ratio * 1000) + 1,
                                                     1000), wd));
                            if (bound.abs() < eps * scale) return acc;
                        }
                        worst_ratio = 0.0;
                        window = 0;
                    }
                }
                prev = t;
            }
        }
    }

    // --- phase 2: parity split when index coefficients have denominators ---
    long d = 1;
    {
        std::vector<const Expr*> stack{body.get()};
        while (!stack.empty()) {
            const Expr* e = stack.back();
            stack.pop_back();
            auto look = [&](const LinForm& f) {
                Rat c = f.coeff(index);
                if (!c.is_zero() && !c.is_integer())
                    d = std::lcm(d, c.den().get_si());
            };
            if (e->kind == ExprKind::Sym || e->kind == ExprKind::Neg1Pow) look(e->form);
            for (const auto& k : e->kids) stack.push_back(k.get());
        }
    }
    if (d > 1) {
        BigFloat total(wd);
        for (long r = 0; r < d; ++r) {
            // k = d*m + r, k >= k0  =>  m >= ceil((k0 - r)/d)
            Rat mstart = Rat(k0 - r, d);
            Rat mfloor = mstart.floor();
            if (mfloor != mstart) mfloor += Rat(1);
            LinForm sub = LinForm::symbol(index + "_p", Rat(d)) + LinForm(Rat(r));
            ExprPtr body2 = expr_substitute(body, {{index, sub}});
            total += eval_infinite_sum(index + "_p", mfloor, body2, ctx);
        }
        return total;
    }

    // --- phase 3: piece decomposition and zeta tails ---
    std::vector<ExprPtr> products;
    explode(body, products);
    std::vector<PieceShape> pieces;
    for (const auto& p : products) {
        PieceShape shape;
        shape.term = p;
        try {
            classify_factor(p, index, +1, shape, local.binding);
        } catch (const DecomposeError&) {
            throw EvalError(EvalErrorCode::TooSlow,
                            "infinite sum is too slow for direct summation and its term "
                            "structure is outside the tail analyzer: " + p->str());
        }
        pieces.push_back(std::move(shape));
    }

    const int J = 36;
    auto tail_at = [&](long n) {
        BigFloat tail(wd);
        for (auto& piece : pieces) {
            size_t dn = piece.pnum.size(), dd = piece.pden.size();
            Rat lead_ratio = piece.rho * piece.pnum.back() / piece.pden.back();
            if (dn < dd || lead_ratio.abs() < Rat(1)) {
                // super-geometric or geometric piece: sum directly
                local.binding[index] = Rat(n);
                EvalContext sub = local;
                BigFloat t(wd),部分(wd);
                BigFloat prev(wd);
                BigFloat piece_acc(wd);
                int zeros = 0;
                for (long k = n;; ++k) {
                    local.binding[index] = Rat(k);
                    EvalValue v = eval_value(piece.term, local);
                    if (v.pole) throw EvalError(EvalErrorCode::Pole, "pole in tail term");
                    piece_acc += v.v;
                    if (v.v.is_zero()) {
                        if (++zeros > 96) break;
                    } else {
                        zeros = 0;
                        if (!prev.is_zero()) {
                            double r = (v.v.abs() / prev.abs()).to_double();
                            if (r < 0.95 &&
                                (v.v.abs() / (BigFloat::from_long(1, wd) -
                                              BigFloat::from_rat(Rat(19, 20), wd)))
                                        .abs() < eps)
                                break;
                        }
                        prev = v.v;
                    }
                    if (k > n + 400000)
                        throw EvalError(EvalErrorCode::TooSlow, "geometric tail too slow");
                }
                tail += piece_acc;
                continue;
            }
            if (dn > dd || lead_ratio.abs() > Rat(1))
                throw EvalError(EvalErrorCode::DivergentSeries,
                                "infinite sum term ratio exceeds one");
            int sign = lead_ratio.sign();
            // decay exponent s = q1/q0 - p1/p0
            size_t deg = dn - 1;
            Rat p1 = deg >= 1 ? piece.pnum[deg - 1] / piece.pnum.back() : Rat(0);
            Rat q1 = deg >= 1 ? piece.pden[deg - 1] / piece.pden.back() : Rat(0);
            Rat s = q1 - p1;
            if (sign > 0 && !piece.has_psi && s <= Rat(1))
                throw EvalError(EvalErrorCode::DivergentSeries, "tail exponent <= 1");
            if (sign > 0 && piece.has_psi && s <= Rat(1))
                throw EvalError(EvalErrorCode::DivergentSeries, "log tail exponent <= 1");
            std::vector<Rat> c = ratio_tail_coeffs(piece.pnum, piece.pden, s, J);
            // asymptotic value of the piece at n for normalization
            BigFloat nb = BigFloat::from_long(n, wd);
            BigFloat lnn = nb.ln();
            std::vector<BigFloat> h(static_cast<size_t>(J), BigFloat(wd));
            bool with_log = piece.has_psi;
            if (with_log) {
                std::vector<Rat> w = psi_weight_coeffs(piece.psi_delta, piece.psi_off, J);
                BigFloat lnd = BigFloat::from_long(piece.psi_delta, wd).ln();
                for (int j = 0; j < J; ++j) {
                    BigFloat hj = lnd * BigFloat::from_rat(c[static_cast<size_t>(j)], wd);
                    for (int i = 0; i < j; ++i)
                        hj += BigFloat::from_rat(c[static_cast<size_t>(i)] *
                                                     w[static_cast<size_t>(j - i)], wd);
                    h[static_cast<size_t>(j)] = hj;
                }
            }
            BigFloat asym(wd);
            {
                BigFloat npow = nb.pow(BigFloat::from_rat(-s, wd));
                for (int j = 0; j < J; ++j) {
                    BigFloat cj = BigFloat::from_rat(c[static_cast<size_t>(j)], wd);
                    if (with_log) asym += (cj * lnn + h[static_cast<size_t>(j)]) * npow;
                    else asym += cj * npow;
                    npow = npow / nb;
                }
            }
            local.binding[index] = Rat(n);
            EvalValue tv = eval_value(piece.term, local);
            if (tv.pole) throw EvalError(EvalErrorCode::Pole, "pole at tail normalization");
            // with alternating sign both C and the zeta pack carry the same
            // (-1)^n convention, so the factors cancel on their own
            BigFloat C = tv.v / asym;
            BigFloat piece_tail(wd);
            for (int j = 0; j < J; ++j) {
                ZetaPack z = zeta_from(s + Rat(j), n, sign, ctx.digits);
                BigFloat cj = BigFloat::from_rat(c[static_cast<size_t>(j)], wd);
                if (with_log) piece_tail += cj * z.logw + h[static_cast<size_t>(j)] * z.plain;
                else piece_tail += cj * z.plain;
            }
            tail += C * piece_tail;
        }
        return tail;
    };

    // root-magnitude guard for the ratio polynomials
    long nstart = std::max<long>({k0 + 640, 6L * (ctx.digits + 6), 64});
    for (const auto& piece : pieces) {
        for (const Poly* p : {&piece.pnum, &piece.pden}) {
            Rat bound(1);
            for (const auto& cf : *p) {
                Rat b = cf.abs() / p->back().abs() + Rat(1);
                if (b > bound) bound = b;
            }
            long lb = 2 * bound.floor().as_long() + 8;
            nstart = std::max(nstart, lb);
        }
    }

    for (int attempt = 0; attempt < 6; ++attempt) {
        // direct part from k0 to nstart-1
        BigFloat direct(wd);
        for (long k = k0; k < nstart; ++k) direct += term_at(k);
        BigFloat v1 = direct + tail_at(nstart);
        BigFloat direct2 = direct;
        for (long k = nstart; k < 2 * nstart; ++k) direct2 += term_at(k);
        BigFloat v2 = direct2 + tail_at(2 * nstart);
        if (std::getenv("HYP_DEBUG_INFSUM"))
            fprintf(stderr, "[infsum] N=%ld v1=%s v2=%s diff=%s eps=%s\n", nstart,
                    v1.str(25).c_str(), v2.str(25).c_str(), (v1 - v2).abs().str(3).c_str(),
                    eps.str(3).c_str());
        BigFloat scale = v2.abs();
        BigFloat one = BigFloat::from_long(1, wd);
        if (scale < one) scale = one;
        if ((v1 - v2).abs() <= eps * scale * BigFloat::from_long(4, wd)) return v2;
        nstart *= 2;
    }
    throw EvalError(EvalErrorCode::TooSlow, "infinite sum tails did not certify");
}

} // namespace hyp::detail
