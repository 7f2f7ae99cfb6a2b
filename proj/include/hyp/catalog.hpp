#pragma once

#include "hyp/numeval.hpp"
#include "hyp/textio.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hyp {

struct MatchResult {
    std::string entry_id;
    std::map<std::string, LinForm> unifier;
    std::vector<std::string> verified_constraints;
};

struct CatalogEntry {
    IdentityEntry entry;
    std::string section; // from the file's `#section:` markers
};

class Catalog {
public:
    static const Catalog& shipped();
    static Catalog load(const std::string& path);

    const std::vector<CatalogEntry>& all() const { return entries_; }
    const IdentityEntry* find(const std::string& id) const;
    const CatalogEntry* find_full(const std::string& id) const;

    // All entries whose lhs spec unifies with the query and whose constraints
    // hold (numerically when a binding is supplied, symbolically otherwise).
    std::vector<MatchResult> match(const HypSpec& query,
                                   const std::optional<std::map<std::string, Rat>>& binding =
                                       std::nullopt) const;

    // filter: "status=closed|summable|transformation" or "section=<name>";
    // empty filter lists everything. Deterministic id order.
    std::vector<const CatalogEntry*> list_entries(const std::string& filter = "") const;

private:
    std::vector<CatalogEntry> entries_;
};

// Complete the binding (definitions evaluated in declaration order), check
// kinds and constraints exactly. Throws EvalError::BadArgument on violation.
std::map<std::string, Rat> complete_binding(const IdentityEntry& e,
                                            std::map<std::string, Rat> binding);

bool constraints_hold(const IdentityEntry& e, const std::map<std::string, Rat>& binding);

// Evaluates both sides at the binding (after applying the unifier to the
// entry). Throws on constraint violation or non-summable sides.
std::pair<BigFloat, BigFloat> instantiate(const IdentityEntry& e,
                                          const std::map<std::string, LinForm>& unifier,
                                          const std::map<std::string, Rat>& binding, int digits);

// Coverage manifest: source label -> artifact reference ("catalog:saal",
// "rule:thom3", "rel:rainv14a", "op:gamma_ratio_limit", "const:psi(1/2)",
// "prop:<test name>").
std::map<std::string, std::string> load_coverage(const std::string& path);
const std::map<std::string, std::string>& shipped_coverage();

} // namespace hyp
