#pragma once

#include "hyp/numeval.hpp"

namespace hyp {

enum class SeriesKind { Terminating, Convergent, Divergent, Degenerate };

struct SeriesClass {
    SeriesKind kind = SeriesKind::Divergent;
    long length = 0;     // number of terms when terminating
    LinForm excess;      // symbolic parametric excess (bottoms minus tops minus ... )
    Rat excess_value;    // excess at the binding
};

// Symbolic parametric excess: sum of bottoms plus 1 minus sum of tops,
// minus 1 for the implicit k! bottom -- for 3F2 this is e+f-a-b-c.
LinForm parametric_excess(const HypSpec& spec);

SeriesClass classify(const HypSpec& spec, const std::map<std::string, Rat>& binding);

// Exact rational value of a terminating series (finite sum of Pochhammer
// ratios). Requires classify(...) == Terminating and a non-degenerate bottom.
Rat sum_terminating_exact(const HypSpec& spec, const std::map<std::string, Rat>& binding);

// Value of a convergent series with certified working accuracy: the first N
// terms are summed directly and the tail is evaluated through the asymptotic
// expansion of the term in inverse powers of k, whose tail sums are Hurwitz
// zetas. Used for terminating input as well (falls back to the exact path).
BigFloat sum_convergent(const HypSpec& spec, const std::map<std::string, Rat>& binding,
                        int precision, const Rat& sigma_min = Rat(1, 2));

// Direct truncation with the crude |t_N| * N / sigma tail bound; the
// independent slow path used by oracles.
BigFloat sum_direct(const HypSpec& spec, const std::map<std::string, Rat>& binding, int precision,
                    long max_terms = 20000000);

// Series reversal of a terminating sum: one top must be exactly -n for the
// named symbol. Returns the reversal prefactor and the reversed spec.
std::pair<ExprPtr, HypSpec> reverse_terminating(const HypSpec& spec, const std::string& n_symbol);

} // namespace hyp
