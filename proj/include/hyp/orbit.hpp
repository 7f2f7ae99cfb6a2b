#pragma once

#include "hyp/transforms.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace hyp {

struct CanonicalSpec {
    HypSpec spec;    // tops and bottoms sorted
    std::string key; // printed form

    static CanonicalSpec of(const HypSpec& s) {
        CanonicalSpec c;
        c.spec = s.canonical();
        c.key = c.spec.str();
        return c;
    }
    bool operator<(const CanonicalSpec& o) const { return key < o.key; }
};

// One applied step: permute the spec's slots, then apply the rule.
struct ChainStep {
    std::string rule;
    std::vector<size_t> top_perm;    // slot assignment applied before the rule
    std::vector<size_t> bottom_perm;
    std::string n_symbol;            // for terminating rules
};

struct Verdict {
    bool related = false;
    std::vector<ChainStep> chain;
    std::set<std::string> sets_used; // subset of {"thomae","rjrjr","reverse"}
    bool incomplete = false;         // closure hit the depth/size limit
};

enum class RuleSet { Thomae, Rjrjr, Reverse };

struct OrbitResult {
    std::set<CanonicalSpec> members;
    bool incomplete = false;
};

OrbitResult orbit_closure(const HypSpec& spec, const std::set<RuleSet>& rules, int max_depth = 6,
                          size_t max_nodes = 20000);

Verdict related(const HypSpec& x, const HypSpec& y, const std::set<RuleSet>& rules,
                int max_depth = 6);

// Replays a chain: returns the accumulated prefactor and the final spec.
std::pair<ExprPtr, HypSpec> replay_chain(const HypSpec& start, const std::vector<ChainStep>& chain);

// Affine unification: substitution for the pattern symbols making the pattern
// spec equal (as multisets) to the target. Target forms may contain symbols.
std::optional<std::map<std::string, LinForm>> unify_specs(const HypSpec& pattern,
                                                          const HypSpec& target);

// Orbit-minimal canonical key with first-occurrence symbol renaming; the
// database lookup key. Terminating specs close over all three rule sets.
std::string orbit_key(const HypSpec& spec);

// Canonical printed form after renaming symbols in order of first occurrence.
std::string renamed_key(const HypSpec& spec);

} // namespace hyp
