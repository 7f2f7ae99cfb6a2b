#include "hyp/psirational.hpp"

#include "hyp/textio.hpp"

#include <map>
#include <numeric>
#include <stdexcept>

namespace hyp {

namespace {

ExprPtr pi_mul(const Rat& r) { return mul(lit(r), pi_const()); }

// cot(pi*r) as cos/sin
ExprPtr cot_pi(const Rat& r) { return divf(cosf(pi_mul(r)), sinf(pi_mul(r))); }

void check_pq(long p, long q) {
    if (!(0 < p && p < q) || std::gcd(p, q) != 1)
        throw std::invalid_argument("psi_rational needs 0 < p < q with gcd(p,q) = 1");
}

// main cosine-log sum of the Gauss formula, n = 1 .. bound
ExprPtr gauss_sum(long p, long q, long bound) {
    std::vector<ExprPtr> terms;
    for (long n = 1; n <= bound; ++n) {
        ExprPtr c = cosf(pi_mul(Rat(2 * n * p, q)));
        ExprPtr l = lnf(mul(lit(2), sinf(pi_mul(Rat(n, q)))));
        terms.push_back(mul(c, l));
    }
    if (terms.empty()) return lit(0);
    return mul(lit(2), add(std::move(terms)));
}

// final half-index term for even q: cos(pi*p) ln(2 sin(pi/2)) = (-1)^p ln 2
ExprPtr even_tail(long p) { return mul(lit(p % 2 == 0 ? 1 : -1), lnf(lit(2))); }

} // namespace

ExprPtr psi_rational(long p, long q) {
    check_pq(p, q);
    long half = q / 2;
    std::vector<ExprPtr> parts;
    parts.push_back(negate(euler_gamma()));
    parts.push_back(negate(mul(lit(Rat(1, 2)), cot_pi(Rat(p, q)))));
    parts.push_back(negate(lnf(lit(q))));
    if (q % 2 == 0) {
        parts.push_back(gauss_sum(p, q, half - 1));
        parts.push_back(even_tail(p));
    } else {
        parts.push_back(gauss_sum(p, q, half));
    }
    return add(std::move(parts));
}

ExprPtr psi_rational_diff(long p1, long p2, long q) {
    check_pq(p1, q);
    check_pq(p2, q);
    long half = q / 2;
    std::vector<ExprPtr> parts;
    parts.push_back(mul(lit(Rat(1, 2)), sub(cot_pi(Rat(p2, q)), cot_pi(Rat(p1, q)))));
    long bound = q % 2 == 0 ? half - 1 : half;
    parts.push_back(sub(gauss_sum(p1, q, bound), gauss_sum(p2, q, bound)));
    if (q % 2 == 0 && (p1 - p2) % 2 != 0)
        parts.push_back(sub(even_tail(p1), even_tail(p2)));
    return add(std::move(parts));
}

namespace {

const std::pair<const char*, const char*> kConstants[] = {
    {"psi(1,3/4)", "pi^2 - 8*G"},
    {"psi(1,1/4)", "pi^2 + 8*G"},
    {"psi(1/2)", "-eg - 2*ln(2)"},
    {"psi(5/8)-psi(1/8)", "sqrt(2)*(pi - 2*ln(sqrt(2)-1))"},
    {"psi(7/8)-psi(3/8)", "sqrt(2)*(pi - 2*ln(1+sqrt(2)))"},
    {"psi(1/6)-psi(2/3)", "-2*ln(2) - 2*pi*sqrt(3)/3"},
    {"psi(1/12)-psi(7/12)", "-2*pi + 2*sqrt(3)*ln(2-sqrt(3))"},
    {"h(n/2)", "psi(n/2+1) + eg"},
};

std::string canon_key(const std::string& key) {
    if (key.find("h(") == 0) return key; // harmonic shorthand stays literal
    return parse_expr(key)->str();
}

} // namespace

std::optional<ExprPtr> psi_constants_lookup(const std::string& key) {
    static const std::map<std::string, std::string> table = [] {
        std::map<std::string, std::string> t;
        for (const auto& [k, v] : kConstants) t[canon_key(k)] = v;
        return t;
    }();
    auto it = table.find(canon_key(key));
    if (it == table.end()) return std::nullopt;
    return parse_expr(it->second);
}

std::vector<std::string> psi_constants_keys() {
    std::vector<std::string> out;
    for (const auto& [k, _] : kConstants) out.push_back(k);
    return out;
}

bool is_exotic_reducible(long q) {
    if (q <= 0) return false;
    while (q % 2 == 0) q /= 2;
    for (long f : {3L, 5L, 17L, 257L, 65537L})
        if (q % f == 0) {
            q /= f;
            if (q % f == 0) return false; // repeated Fermat prime
        }
    return q == 1;
}

} // namespace hyp
