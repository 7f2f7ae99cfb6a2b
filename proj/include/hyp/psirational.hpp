#pragma once

#include "hyp/expr.hpp"

#include <optional>
#include <string>

namespace hyp {

// Gauss digamma expansion of psi(p/q) for 0 < p < q, gcd(p,q)=1: an exact
// expression over eg, pi*cot, ln and cos*ln(2 sin) terms.
ExprPtr psi_rational(long p, long q);

// psi(p1/q) - psi(p2/q) with the shared -eg - ln(q) part cancelled.
ExprPtr psi_rational_diff(long p1, long p2, long q);

// Shipped closed forms (exact-match keys in the expression grammar, e.g.
// "psi(1,3/4)" or "psi(5/8)-psi(1/8)"); nullopt for unknown keys.
std::optional<ExprPtr> psi_constants_lookup(const std::string& key);
std::vector<std::string> psi_constants_keys();

// True when q is a power of two times distinct Fermat primes, the
// constructable-angle criterion used for exoticness reporting.
bool is_exotic_reducible(long q);

} // namespace hyp
