#pragma once

#include "hyp/numeval.hpp"
#include "hyp/textio.hpp"

namespace hyp {

// |sum of coeff*value + inhomogeneous| at the binding; every term must be
// terminating or convergent there.
BigFloat check_relation(const ContigRelation& rel, const std::map<std::string, Rat>& binding,
                        int precision);

// Rewrites 3F2(a,b,c;a+m,e) as a closed expression in the single atom
// 3F2(a,b,c;a+1,e) plus Gamma terms, via the m-step bottom-shift expansion and
// the unit-shift inversion. m >= 1; m == 1 returns the spec unchanged.
ExprPtr chen_shift(const HypSpec& spec, long m);

// Splits a (t, b) top/bottom pair with t = b+1 into a k-weighted combination
// of two plain series: F(..., b+1; ..., b) =
//   (prod tops' / (b prod bottoms')) F(tops'+1; bottoms'+1) + F(tops'; bottoms').
// Returns nullopt when no such pair exists.
std::optional<ExprPtr> split_shifted_pair(const HypSpec& spec);

// Shipped relation file (data/relations.txt).
const std::vector<ContigRelation>& shipped_relations();
const ContigRelation* find_relation(const std::string& id);

} // namespace hyp
