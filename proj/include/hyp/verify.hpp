#pragma once

#include "hyp/catalog.hpp"

#include <variant>

namespace hyp {

struct VerifyFailure {
    std::map<std::string, Rat> binding;
    std::string residual; // printed value or error text
};

struct VerifyReport {
    std::string entry_id;
    int trials = 0;
    int exact_trials = 0; // trials decided by the exact rational path
    BigFloat max_residual;
    std::vector<VerifyFailure> failures;
    int precision = 40;

    bool passed() const { return failures.empty(); }
    std::string str() const;
};

struct VerifyOptions {
    int trials = 10;
    int precision = 40;
    int tolerance_digits = 30;    // pass when residual <= 10^-tolerance
    unsigned long seed = 20250930;
    long max_binding_attempts = 4000;
    Rat sigma_min = Rat(1, 20);   // floor for non-terminating sides while sampling
};

VerifyReport verify_entry(const Catalog& cat, const std::string& entry_id,
                          const VerifyOptions& opts = {});

// Deterministic admissible-binding sampler. Integer kinds draw inside their
// declared bounds, reals draw small-denominator rationals away from poles of
// every Gamma/polygamma argument (distance >= 1/20) and away from degenerate
// or divergent series sides. Returns nullopt when the attempt budget runs out.
std::optional<std::map<std::string, Rat>> sample_binding(const IdentityEntry& e,
                                                         unsigned long seed, int trial_index,
                                                         const VerifyOptions& opts);

// Same sampler without the pole/series admissibility probe (degenerate-guard
// entries sample here, since their whole point is a non-evaluable side).
std::optional<std::map<std::string, Rat>> sample_binding_unprobed(const IdentityEntry& e,
                                                                  unsigned long seed,
                                                                  int trial_index,
                                                                  const VerifyOptions& opts);

// Independent oracle: direct summation with no identity shortcuts. Exact
// rational when every node reduces exactly; numeric otherwise (embedded pFq
// nodes are summed by direct truncation, never by the zeta-tail path).
std::variant<Rat, BigFloat> brute_force_sum(const ExprPtr& e,
                                            const std::map<std::string, Rat>& binding,
                                            int precision = 40);

} // namespace hyp
