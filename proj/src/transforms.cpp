#include "hyp/transforms.hpp"

#include <stdexcept>

namespace hyp {

namespace {

ExprPtr gam(const LinForm& f) { return gammaf(sym(f)); }

ExprPtr gamma_ratio(std::vector<LinForm> num, std::vector<LinForm> den) {
    std::vector<ExprPtr> n, d;
    for (const auto& f : num) n.push_back(gam(f));
    for (const auto& f : den) d.push_back(gam(f));
    return divf(mul(std::move(n)), mul(std::move(d)));
}

} // namespace

TransformResult apply_thomae(int k, const HypSpec& spec) {
    if (k < 1 || k > 9) throw std::out_of_range("Thomae rule index must be 1..9");
    if (spec.tops.size() != 3 || spec.bottoms.size() != 2)
        throw std::invalid_argument("Thomae rules act on 3F2 specs");
    const LinForm& a = spec.tops[0];
    const LinForm& b = spec.tops[1];
    const LinForm& c = spec.tops[2];
    const LinForm& e = spec.bottoms[0];
    const LinForm& f = spec.bottoms[1];
    LinForm sg = e + f - a - b - c; // Gamma(-s) argument, s = a+b+c-e-f

    switch (k) {
        case 1:
            return {gamma_ratio({sg, e, f}, {c, e + f - b - c, e + f - a - c}),
                    HypSpec({sg, f - c, e - c}, {e + f - b - c, e + f - a - c})};
        case 2:
            return {gamma_ratio({sg, e, f}, {b, e + f - b - c, e + f - a - b}),
                    HypSpec({sg, e - b, f - b}, {e + f - b - c, e + f - a - b})};
        case 3:
            return {gamma_ratio({sg, e}, {e - a, e + f - b - c}),
                    HypSpec({a, f - b, f - c}, {f, e + f - b - c})};
        case 4:
            return {gamma_ratio({sg, f}, {f - a, e + f - b - c}),
                    HypSpec({a, e - c, e - b}, {e, e + f - b - c})};
        case 5:
            return {gamma_ratio({sg, e, f}, {a, e + f - a - c, e + f - a - b}),
                    HypSpec({sg, e - a, f - a}, {e + f - a - b, e + f - a - c})};
        case 6:
            return {gamma_ratio({sg, e}, {e - b, e + f - a - c}),
                    HypSpec({b, f - c, f - a}, {f, e + f - a - c})};
        case 7:
            return {gamma_ratio({sg, f}, {f - b, e + f - a - c}),
                    HypSpec({b, e - c, e - a}, {e, e + f - a - c})};
        case 8:
            return {gamma_ratio({sg, e}, {e - c, e + f - a - b}),
                    HypSpec({c, f - a, f - b}, {f, e + f - a - b})};
        case 9:
            return {gamma_ratio({sg, f}, {f - c, e + f - a - b}),
                    HypSpec({c, e - a, e - b}, {e, e + f - a - b})};
    }
    throw std::logic_error("unreachable");
}

TransformResult apply_rjrjr(const std::string& id, const HypSpec& spec,
                            const std::string& n_symbol) {
    if (spec.tops.size() != 3 || spec.bottoms.size() != 2)
        throw std::invalid_argument("RJRJR rules act on 3F2 specs");
    LinForm neg_n = LinForm::symbol(n_symbol, Rat(-1));
    if (spec.tops[0] != neg_n)
        throw std::invalid_argument("RJRJR rules need the first top equal to -" + n_symbol +
                                    ", got " + spec.str());
    LinForm n = LinForm::symbol(n_symbol);
    const LinForm& a = spec.tops[1];
    const LinForm& b = spec.tops[2];
    const LinForm& d = spec.bottoms[0];
    const LinForm& e = spec.bottoms[1];
    LinForm one(Rat(1));
    LinForm sg = e + d + n - a - b; // sigma of the terminating family

    ExprPtr nsym = sym(n);
    auto poch = [&](const LinForm& x) { return pochhammer(sym(x), nsym); };

    if (id == "ra1p")
        return {divf(poch(d - a), poch(d)), HypSpec({neg_n, a, e - b}, {e, one + a - d - n})};
    if (id == "ra2p")
        return {divf(mul(neg1pow(n), poch(one - sg)), poch(d)),
                HypSpec({neg_n, e - b, e - a}, {e, sg - n})};
    if (id == "ra3")
        return {divf(mul(poch(d - a), poch(e - a)), mul(poch(d), poch(e))),
                HypSpec({neg_n, a, one - sg}, {one + a - d - n, one - e + a - n})};
    if (id == "ra4")
        return {divf(mul(poch(d - a), poch(b)), mul(poch(d), poch(e))),
                HypSpec({neg_n, e - b, one - d - n}, {one - b - n, one + a - d - n})};
    if (id == "ra6")
        return {divf(mul({neg1pow(n), poch(one - sg), poch(b)}), mul(poch(d), poch(e))),
                HypSpec({neg_n, e - b, d - b}, {one - b - n, sg - n})};
    if (id == "ra8")
        return {divf(mul({neg1pow(n), poch(d - a), poch(d - b)}), mul(poch(d), poch(e))),
                HypSpec({neg_n, one - sg, one - d - n}, {one + b - d - n, one + a - d - n})};
    if (id == "raB" || id == "reverse")
        return {divf(mul({neg1pow(n), poch(a), poch(b)}), mul(poch(d), poch(e))),
                HypSpec({neg_n, one - d - n, one - e - n}, {one - b - n, one - a - n})};
    throw std::invalid_argument("unknown RJRJR rule '" + id + "'");
}

std::vector<std::string> thomae_rule_ids() {
    return {"thom1", "thom2", "thom3", "thom4", "thom5", "thom6", "thom7", "thom8", "thom9"};
}

std::vector<std::string> rjrjr_rule_ids() {
    return {"ra1p", "ra2p", "ra3", "ra4", "ra6", "ra8", "raB"};
}

TransformResult apply_rule(const std::string& id, const HypSpec& spec,
                           const std::string& n_symbol) {
    if (id.rfind("thom", 0) == 0 && id.size() == 5)
        return apply_thomae(id[4] - '0', spec);
    return apply_rjrjr(id, spec, n_symbol);
}

} // namespace hyp
