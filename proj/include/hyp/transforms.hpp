#pragma once

#include "hyp/expr.hpp"

#include <string>
#include <vector>

namespace hyp {

// A two-term transformation: spec -> prefactor * image-spec. Slot assignment
// is positional: tops are read as (a,b,c) for the non-terminating rules and
// (-n,a,b) for the terminating ones; bottoms as (e,f) / (d,e). Callers choose
// slots by permuting the spec before applying a rule.
struct TransformResult {
    ExprPtr prefactor;
    HypSpec image;
};

// k in 1..9.
TransformResult apply_thomae(int k, const HypSpec& spec);

// id in {ra1p, ra2p, ra3, ra4, ra6, ra8, raB, reverse}; "reverse" is raB.
// The first top must be exactly -n for the named symbol.
TransformResult apply_rjrjr(const std::string& id, const HypSpec& spec,
                            const std::string& n_symbol);

std::vector<std::string> thomae_rule_ids();
std::vector<std::string> rjrjr_rule_ids();

// Applies a rule by id ("thom1".."thom9", "ra1p", ..., "raB", "reverse").
TransformResult apply_rule(const std::string& id, const HypSpec& spec,
                           const std::string& n_symbol = "");

} // namespace hyp
