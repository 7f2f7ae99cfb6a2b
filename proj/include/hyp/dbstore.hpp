#pragma once

#include "hyp/catalog.hpp"
#include "hyp/textio.hpp"

namespace hyp {

struct DbRecord {
    IdentityEntry entry;
    std::string canonical_key; // orbit-minimal renamed canonical spec
    std::string provenance;
};

class DbStore {
public:
    static DbStore load(const std::string& path);
    void save(const std::string& path) const;

    // Seeds a store from the shipped catalog (plus external-citation stubs).
    static DbStore seeded();

    const std::vector<DbRecord>& records() const { return records_; }

    // Orbit-key lookup: every member of the query's transformation orbit maps
    // to the same key, so any Thomae image of a stored spec finds its record.
    std::vector<const DbRecord*> db_lookup(const HypSpec& spec) const;

    // Throws on duplicate (key, constraint signature); recomputes the key.
    void db_add(DbRecord rec);

    // Applies the shipped multi-term relations across known records and emits
    // candidates where all but one term resolves. Candidates are not verified.
    std::vector<DbRecord> db_scan_for_new(size_t max_candidates = 50) const;

    static std::string parse_key(const DbRecord& r);
    static DbRecord parse_record_line(const std::string& line);
    static std::string print_record_line(const DbRecord& r);

private:
    std::vector<DbRecord> records_;
};

} // namespace hyp
