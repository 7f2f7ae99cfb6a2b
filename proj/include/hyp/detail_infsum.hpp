#pragma once

#include "hyp/numeval.hpp"

namespace hyp::detail {

// Infinite-sum evaluator behind Sum nodes with upper bound infinity.
// Direct summation with geometric certification where the terms decay
// geometrically; otherwise term-ratio analysis with Hurwitz-zeta (and
// log-weighted zeta) tail evaluation, with parity splitting for half-step
// Gamma/psi arguments.
BigFloat eval_infinite_sum(const std::string& index, const Rat& lo, const ExprPtr& body,
                           const EvalContext& ctx);

} // namespace hyp::detail
