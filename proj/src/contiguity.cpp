#include "hyp/contiguity.hpp"

#include "hyp/detail_hypeval.hpp"
#include "hyp/hypseries.hpp"

#include <fstream>

namespace hyp {

BigFloat check_relation(const ContigRelation& rel, const std::map<std::string, Rat>& binding,
                        int precision) {
    EvalContext ctx;
    ctx.digits = precision;
    ctx.binding = binding;
    int wd = precision + 10;
    BigFloat acc(wd);
    for (const auto& [coeff, spec] : rel.terms) {
        auto cls = classify(spec, binding);
        if (cls.kind == SeriesKind::Divergent || cls.kind == SeriesKind::Degenerate)
            throw EvalError(EvalErrorCode::DivergentSeries,
                            "relation term not summable at binding: " + spec.str());
        BigFloat c = eval_expr(coeff, ctx);
        BigFloat v = eval_expr(hyp_expr(spec), ctx);
        acc += c * v;
    }
    if (rel.inhomogeneous) acc += eval_expr(rel.inhomogeneous, ctx);
    return acc.abs();
}

namespace {

// Slots of the shift pattern: a top t and bottom b with b - t = m (integer).
struct ShiftSlots {
    LinForm a, b, c, e; // tops a,b,c and the other bottom e
};

std::optional<ShiftSlots> find_shift(const HypSpec& spec, long m) {
    if (spec.tops.size() != 3 || spec.bottoms.size() != 2) return std::nullopt;
    for (size_t i = 0; i < 3; ++i)
        for (size_t j = 0; j < 2; ++j) {
            if (spec.bottoms[j] - spec.tops[i] == LinForm(Rat(m))) {
                ShiftSlots s;
                s.a = spec.tops[i];
                s.c = spec.tops[(i + 1) % 3];
                s.b = spec.tops[(i + 2) % 3];
                s.e = spec.bottoms[1 - j];
                return s;
            }
        }
    return std::nullopt;
}

} // namespace

ExprPtr chen_shift(const HypSpec& spec, long m) {
    if (m < 1) throw EvalError(EvalErrorCode::BadArgument, "chen_shift needs m >= 1");
    auto slots = find_shift(spec, m);
    if (!slots)
        throw EvalError(EvalErrorCode::BadArgument,
                        "no top/bottom pair with offset " + std::to_string(m) + " in " +
                            spec.str());
    const LinForm& a = slots->a;
    const LinForm& b = slots->b;
    const LinForm& c = slots->c;
    const LinForm& e = slots->e;
    LinForm one(Rat(1));
    if (m == 1) return hyp_expr(HypSpec({a, b, c}, {a + one, e}));

    // unit-shift inversion: with G_j = 3F2(a+j,b,c;a+j+1,e),
    //   G_{j+1} = A_j + B_j G_j,
    //   A_j = (a+j+1) Gamma(e) Gamma(e-b-c+1) / ((a+j-b+1)(a+j-c+1) Gamma(e-b) Gamma(e-c))
    //   B_j = (a+j+1)(a+j+1-e) / ((a+j-b+1)(a+j-c+1))
    ExprPtr f0 = hyp_expr(HypSpec({a, b, c}, {a + one, e}));
    ExprPtr gamma_part =
        divf(mul(gammaf(sym(e)), gammaf(sym(e - b - c + one))),
             mul(gammaf(sym(e - b)), gammaf(sym(e - c))));
    ExprPtr alpha = lit(0), beta = lit(1); // G_j = alpha + beta*F0
    std::vector<ExprPtr> pieces;
    for (long k = 0;; ++k) {
        // coefficient of G_k in the m-step expansion:
        // Gamma(a+m)/Gamma(a) * (-1)^k / (k! (m-1-k)! (a+k))
        Rat fk(1), fmk(1);
        for (long i = 2; i <= k; ++i) fk *= Rat(i);
        for (long i = 2; i <= m - 1 - k; ++i) fmk *= Rat(i);
        ExprPtr coef = divf(mul(lit(Rat(k % 2 == 0 ? 1 : -1) / (fk * fmk)),
                                gammaf(sym(a + LinForm(Rat(m))))),
                            mul(gammaf(sym(a)), sym(a + LinForm(Rat(k)))));
        pieces.push_back(mul(coef, add(alpha, mul(beta, f0))));
        if (k + 1 >= m) break;
        // advance: G_{k+1} = A_k + B_k G_k
        LinForm aj = a + LinForm(Rat(k));
        ExprPtr denom = mul(sym(aj - b + one), sym(aj - c + one));
        ExprPtr A = divf(mul(sym(aj + one), gamma_part), denom);
        ExprPtr B = divf(mul(sym(aj + one), sym(aj + one - e)), denom);
        alpha = add(A, mul(B, alpha));
        beta = mul(B, beta);
    }
    return add(std::move(pieces));
}

std::optional<ExprPtr> split_shifted_pair(const HypSpec& spec) {
    for (size_t i = 0; i < spec.tops.size(); ++i)
        for (size_t j = 0; j < spec.bottoms.size(); ++j) {
            if (spec.tops[i] - spec.bottoms[j] != LinForm(Rat(1))) continue;
            const LinForm& r = spec.bottoms[j];
            HypSpec base;
            for (size_t k = 0; k < spec.tops.size(); ++k)
                if (k != i) base.tops.push_back(spec.tops[k]);
            for (size_t k = 0; k < spec.bottoms.size(); ++k)
                if (k != j) base.bottoms.push_back(spec.bottoms[k]);
            HypSpec shifted;
            LinForm one(Rat(1));
            for (const auto& t : base.tops) shifted.tops.push_back(t + one);
            for (const auto& b : base.bottoms) shifted.bottoms.push_back(b + one);
            std::vector<ExprPtr> num, den;
            for (const auto& t : base.tops) num.push_back(sym(t));
            den.push_back(sym(r));
            for (const auto& b : base.bottoms) den.push_back(sym(b));
            ExprPtr weighted = mul(divf(mul(std::move(num)), mul(std::move(den))),
                                   hyp_expr(shifted));
            return add(weighted, hyp_expr(base));
        }
    return std::nullopt;
}

namespace {

std::vector<ContigRelation> load_relations(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open relation file: " + path);
    std::vector<ContigRelation> out;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        bool blank = line.find_first_not_of(" \t\r") == std::string::npos;
        if (blank) continue;
        out.push_back(parse_relation_record(line));
    }
    return out;
}

} // namespace

const std::vector<ContigRelation>& shipped_relations() {
    static const std::vector<ContigRelation> rels =
        load_relations(std::string(HYP_DATA_DIR) + "/relations.txt");
    return rels;
}

const ContigRelation* find_relation(const std::string& id) {
    for (const auto& r : shipped_relations())
        if (r.id == id) return &r;
    return nullptr;
}

} // namespace hyp
