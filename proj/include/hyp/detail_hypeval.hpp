#pragma once

#include "hyp/numeval.hpp"

namespace hyp::detail {

// Implemented by the series module; evaluates an embedded pFq(1) node.
EvalValue eval_hyp_node(const HypSpec& spec, const EvalContext& ctx);

// Exact value for terminating specs, nullopt for convergent ones; throws for
// degenerate or divergent input.
std::optional<Rat> eval_hyp_exact(const HypSpec& spec,
                                  const std::map<std::string, Rat>& binding);

} // namespace hyp::detail
