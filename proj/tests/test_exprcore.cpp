#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hyp/expr.hpp"

#include <random>

using namespace hyp;

namespace {

std::map<std::string, Rat> bind(std::initializer_list<std::pair<std::string, Rat>> xs) {
    std::map<std::string, Rat> m;
    for (auto& [k, v] : xs) m[k] = v;
    return m;
}

LinForm random_form(std::mt19937& rng) {
    static const char* names[] = {"a", "b", "c", "e", "f", "n"};
    std::uniform_int_distribution<int> nterms(0, 4), coef(-6, 6), den(1, 5);
    LinForm f(Rat(coef(rng), den(rng)));
    int t = nterms(rng);
    for (int i = 0; i < t; ++i)
        f = f + LinForm::symbol(names[rng() % 6], Rat(coef(rng), den(rng)));
    return f;
}

} // namespace

TEST_CASE("rational arithmetic basics") {
    Rat a(1, 2), b(1, 3), c(1, 5);
    CHECK((a + b - c).str() == "19/30");
    CHECK(Rat(6, 4).str() == "3/2");
    CHECK(Rat(-3, -6).str() == "1/2");
    CHECK(Rat(2, -4).str() == "-1/2");
    CHECK(Rat::parse("-6/19").str() == "-6/19");
    CHECK(Rat(-7, 2).floor() == Rat(-4));
    CHECK(Rat(3, 2).pow_int(-2) == Rat(4, 9));
    CHECK(Rat(0).is_nonpositive_integer());
    CHECK(Rat(-3).is_nonpositive_integer());
    CHECK(!Rat(-3, 2).is_nonpositive_integer());
    CHECK_THROWS(Rat(1) / Rat(0));
}

TEST_CASE("linform_eval examples") {
    LinForm f = LinForm::symbol("a") + LinForm::symbol("b") - LinForm::symbol("c");
    CHECK(f.eval(bind({{"a", Rat(1, 2)}, {"b", Rat(1, 3)}, {"c", Rat(1, 5)}})) == Rat(19, 30));

    LinForm zero;
    CHECK(zero.eval(bind({{"a", Rat(7)}})) == Rat(0));

    LinForm g = LinForm::symbol("x", Rat(2)) - LinForm::symbol("t", Rat(2)) + LinForm::symbol("p");
    CHECK(g.eval(bind({{"x", Rat(3)}, {"t", Rat(1)}, {"p", Rat(0)}})) == Rat(4));

    CHECK_THROWS(f.eval(bind({{"a", Rat(1)}})));
}

TEST_CASE("linform associativity/commutativity on random forms") {
    std::mt19937 rng(42);
    for (int i = 0; i < 1000; ++i) {
        LinForm f = random_form(rng), g = random_form(rng), h = random_form(rng);
        CHECK((f + g) + h == f + (g + h));
        CHECK(f + g == g + f);
    }
}

TEST_CASE("linform_eval is a ring homomorphism") {
    std::mt19937 rng(7);
    auto b = bind({{"a", Rat(2, 3)}, {"b", Rat(-1, 2)}, {"c", Rat(5)},
                   {"e", Rat(1, 7)}, {"f", Rat(-4)}, {"n", Rat(3)}});
    for (int i = 0; i < 200; ++i) {
        LinForm f = random_form(rng), g = random_form(rng);
        Rat r(static_cast<long>(rng() % 11) - 5, 3);
        CHECK((f + g).eval(b) == f.eval(b) + g.eval(b));
        CHECK(f.scaled(r).eval(b) == r * f.eval(b));
    }
}

TEST_CASE("expr_substitute examples") {
    // Gamma(a) with a := c+n
    auto e = gammaf(sym("a"));
    LinForm cn = LinForm::symbol("c") + LinForm::symbol("n");
    auto r = expr_substitute(e, {{"a", cn}});
    CHECK(expr_equal_structural(r, gammaf(sym(cn))));

    // sum over k: the index shadows an outer binding of k
    auto body = gammaf(sym(LinForm::symbol("a") + LinForm::symbol("k")));
    auto s = sum_expr("k", LinForm(Rat(0)), LinForm::symbol("n"), body);
    auto s2 = expr_substitute(s, {{"k", LinForm::symbol("j")}});
    CHECK(expr_equal_structural(s, s2));

    // Neg1Pow(n) with n := m+1
    auto p = neg1pow(LinForm::symbol("n"));
    auto p2 = expr_substitute(p, {{"n", LinForm::symbol("m") + LinForm(Rat(1))}});
    CHECK(expr_equal_structural(p2, neg1pow(LinForm::symbol("m") + LinForm(Rat(1)))));

    // identity binding is the identity
    auto q = mul(gammaf(sym("a")), polygamma(1, sym("b")));
    auto q2 = expr_substitute(q, {{"a", LinForm::symbol("a")}, {"b", LinForm::symbol("b")}});
    CHECK(expr_equal_structural(q, q2));
}

TEST_CASE("structural equality and folding") {
    LinForm ab = LinForm::symbol("a") + LinForm::symbol("b");
    LinForm ba = LinForm::symbol("b") + LinForm::symbol("a");
    CHECK(expr_equal_structural(gammaf(sym(ab)), gammaf(sym(ba))));

    CHECK(!expr_equal_structural(polygamma(0, sym("a")), polygamma(1, sym("a"))));

    // pi*1 folds to pi
    CHECK(expr_equal_structural(mul(pi_const(), lit(1)), pi_const()));
    // pi*0 annihilates
    CHECK(expr_equal_structural(mul(pi_const(), lit(0)), lit(0)));

    // products print with sorted factors
    auto m1 = mul(gammaf(sym("b")), gammaf(sym("a")));
    auto m2 = mul(gammaf(sym("a")), gammaf(sym("b")));
    CHECK(expr_equal_structural(m1, m2));
    CHECK(m1->str() == "Gamma(a)*Gamma(b)");
}

TEST_CASE("capture avoidance renames a sum index") {
    // substitute a := k into sum(k, 0, n, Gamma(a+k)): outer k must not be captured
    auto body = gammaf(sym(LinForm::symbol("a") + LinForm::symbol("k")));
    auto s = sum_expr("k", LinForm(Rat(0)), LinForm::symbol("n"), body);
    auto r = expr_substitute(s, {{"a", LinForm::symbol("k")}});
    std::vector<std::string> syms;
    collect_symbols(r, syms);
    // the free symbols are n and the outer k; the bound index was renamed
    CHECK(std::find(syms.begin(), syms.end(), "k") != syms.end());
    CHECK(r->index != "k");
}
