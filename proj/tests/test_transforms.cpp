#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hyp/hypseries.hpp"
#include "hyp/textio.hpp"
#include "hyp/transforms.hpp"

#include <random>

using namespace hyp;

namespace {

HypSpec spec_of(const std::string& s) {
    auto e = parse_expr(s);
    REQUIRE(e->kind == ExprKind::Hyp);
    return e->hyp;
}

bool close(const BigFloat& a, const BigFloat& b, int digits) {
    BigFloat diff = (a - b).abs();
    BigFloat scale = a.abs();
    BigFloat one = BigFloat::from_long(1, a.digits());
    if (scale < one) scale = one;
    return diff <= BigFloat::eps(digits, a.digits()) * scale;
}

BigFloat hyp_value(const HypSpec& s, const EvalContext& c) {
    return eval_expr(hyp_expr(s), c);
}

} // namespace

TEST_CASE("thom8 on a terminating spec reproduces the known image") {
    // slots: a,b,-n on top; e,f on the bottom; thom8 uses the third top as c
    auto r = apply_thomae(8, spec_of("3F2(a,b,-n;e,f)"));
    CHECK(r.image == spec_of("3F2(-n,f-b,f-a;e+f-a-b,f)"));
    CHECK(r.prefactor->str() == "Gamma(-a-b+e+f+n)*Gamma(e)/(Gamma(-a-b+e+f)*Gamma(e+n))");
}

TEST_CASE("thom4 and thom1 on (a,b,c+n;c,e)") {
    // thom4 with slot order (b,c+n,a;e,c) lands on (-n,a,c-b;c,e-b-n)
    auto r4 = apply_thomae(4, spec_of("3F2(a,b,c+n;c,e)"));
    CHECK(r4.image == spec_of("3F2(-n,a,c-b;c,e-b-n)"));
    // thom1 with natural slots lands on (-n, e-n-a-b, e-c-n; e-a-n, e-b-n)
    auto r1 = apply_thomae(1, spec_of("3F2(a,b,c+n;c,e)"));
    CHECK(r1.image == spec_of("3F2(-n,e-n-a-b,e-c-n;e-a-n,e-b-n)"));
}

TEST_CASE("ra8 with swapped bottoms gives the documented terminating image") {
    auto r = apply_rjrjr("ra8", spec_of("3F2(-n,a,b;e,c)"), "n");
    CHECK(r.image == spec_of("3F2(-n,1+a+b-e-c-n,1-e-n;1+a-e-n,1+b-e-n)"));
}

TEST_CASE("thomae value preservation at random bindings") {
    std::mt19937 rng(17);
    HypSpec generic = spec_of("3F2(a,b,c;e,f)");
    int done = 0;
    while (done < 50) {
        std::map<std::string, Rat> b{
            {"a", Rat(static_cast<long>(rng() % 9) - 4, 2 + rng() % 5)},
            {"b", Rat(static_cast<long>(rng() % 9) - 4, 2 + rng() % 5)},
            {"c", Rat(static_cast<long>(rng() % 9) - 4, 2 + rng() % 5)},
            {"e", Rat(1 + static_cast<long>(rng() % 12), 2 + rng() % 5)},
            {"f", Rat(1 + static_cast<long>(rng() % 12), 2 + rng() % 5)}};
        auto cls = classify(generic, b);
        if (cls.kind != SeriesKind::Convergent || cls.excess_value < Rat(1)) continue;
        int k = 1 + static_cast<int>(rng() % 9);
        auto r = apply_thomae(k, generic);
        auto icls = classify(r.image, b);
        if (icls.kind == SeriesKind::Degenerate || icls.kind == SeriesKind::Divergent) continue;
        if (icls.kind == SeriesKind::Convergent && icls.excess_value < Rat(1, 2)) continue;
        EvalContext c;
        c.digits = 40;
        c.binding = b;
        BigFloat lhs, rhs;
        try {
            lhs = hyp_value(generic, c);
            rhs = eval_expr(r.prefactor, c) * hyp_value(r.image, c);
        } catch (const EvalError&) {
            continue; // pole in the prefactor at this binding
        }
        ++done;
        CAPTURE(k);
        CHECK(close(lhs, rhs, 30));
    }
}

TEST_CASE("rjrjr basic images") {
    auto r = apply_rjrjr("ra1p", spec_of("3F2(-n,a,b;d,e)"), "n");
    CHECK(r.image == spec_of("3F2(-n,a,e-b;e,1+a-d-n)"));
    CHECK(r.prefactor->str() == "poch(-a+d,n)/poch(d,n)");

    auto rb = apply_rjrjr("raB", spec_of("3F2(-n,a,b;d,e)"), "n");
    CHECK(rb.image == spec_of("3F2(-n,1-d-n,1-e-n;1-b-n,1-a-n)"));

    CHECK_THROWS(apply_rjrjr("ra1p", spec_of("3F2(a,b,c;d,e)"), "n"));
    CHECK_THROWS(apply_rjrjr("nope", spec_of("3F2(-n,a,b;d,e)"), "n"));
}

TEST_CASE("rjrjr value preservation on terminating series") {
    std::mt19937 rng(29);
    HypSpec generic = spec_of("3F2(-n,a,b;d,e)");
    static const char* ids[] = {"ra1p", "ra2p", "ra3", "ra4", "ra6", "ra8", "raB"};
    for (const char* id : ids) {
        int done = 0;
        while (done < 50) {
            std::map<std::string, Rat> b{
                {"n", Rat(1 + static_cast<long>(rng() % 4))},
                {"a", Rat(static_cast<long>(rng() % 11) - 5, 2 + rng() % 5)},
                {"b", Rat(static_cast<long>(rng() % 11) - 5, 2 + rng() % 5)},
                {"d", Rat(1 + static_cast<long>(rng() % 9), 2 + rng() % 5)},
                {"e", Rat(1 + static_cast<long>(rng() % 9), 2 + rng() % 5)}};
            auto r = apply_rjrjr(id, generic, "n");
            if (classify(r.image, b).kind != SeriesKind::Terminating) continue;
            EvalContext c;
            c.digits = 40;
            c.binding = b;
            BigFloat lhs, rhs;
            try {
                lhs = BigFloat::from_rat(sum_terminating_exact(generic, b), 50);
                rhs = eval_expr(r.prefactor, c) *
                      BigFloat::from_rat(sum_terminating_exact(r.image, b), 50);
            } catch (const EvalError&) {
                continue;
            }
            ++done;
            CAPTURE(id);
            CHECK(close(lhs, rhs, 30));
        }
    }
}
