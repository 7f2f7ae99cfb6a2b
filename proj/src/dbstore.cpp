#include "hyp/dbstore.hpp"

#include "hyp/contiguity.hpp"
#include "hyp/orbit.hpp"

#include <fstream>
#include <sstream>

namespace hyp {

namespace {

std::string trim_copy(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::string constraint_signature(const IdentityEntry& e) {
    return print_constraints(e.constraints);
}

std::string entry_key(const IdentityEntry& e) {
    if (e.lhs->kind == ExprKind::Hyp) return orbit_key(e.lhs->hyp);
    return "expr:" + e.lhs->str();
}

} // namespace

std::string DbStore::parse_key(const DbRecord& r) { return entry_key(r.entry); }

DbRecord DbStore::parse_record_line(const std::string& line) {
    // <identity record: 6 fields> | <key> | <provenance>
    std::vector<std::string> fields;
    {
        std::string cur;
        int depth = 0;
        for (char c : line) {
            if (c == '(') ++depth;
            if (c == ')') --depth;
            if (c == '|' && depth == 0) {
                fields.push_back(cur);
                cur.clear();
            } else {
                cur += c;
            }
        }
        fields.push_back(cur);
    }
    if (fields.size() != 8)
        throw ParseError("db record needs 8 fields, got " + std::to_string(fields.size()),
                         {1, 1, 1});
    std::string head;
    for (size_t i = 0; i < 6; ++i) head += (i ? "|" : "") + fields[i];
    DbRecord r;
    r.entry = parse_identity_record(head);
    r.canonical_key = trim_copy(fields[6]);
    r.provenance = trim_copy(fields[7]);
    return r;
}

std::string DbStore::print_record_line(const DbRecord& r) {
    return print_identity_record(r.entry) + " | " + r.canonical_key + " | " + r.provenance;
}

DbStore DbStore::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open db file: " + path);
    DbStore db;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        if (trim_copy(line).empty()) continue;
        db.records_.push_back(parse_record_line(line));
    }
    return db;
}

void DbStore::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write db file: " + path);
    for (const auto& r : records_) out << print_record_line(r) << "\n";
}

DbStore DbStore::seeded() {
    DbStore db;
    for (const auto& ce : Catalog::shipped().all()) {
        DbRecord r;
        r.entry = ce.entry;
        r.canonical_key = entry_key(r.entry);
        r.provenance = "catalog:" + ce.entry.id;
        // stubs for externally cited evaluations keep their citation text
        if (ce.entry.ref.find("external") != std::string::npos)
            r.provenance = ce.entry.ref;
        db.records_.push_back(std::move(r));
    }
    return db;
}

std::vector<const DbRecord*> DbStore::db_lookup(const HypSpec& spec) const {
    std::string key = orbit_key(spec);
    std::vector<const DbRecord*> out;
    for (const auto& r : records_)
        if (r.canonical_key == key) out.push_back(&r);
    return out;
}

void DbStore::db_add(DbRecord rec) {
    rec.canonical_key = entry_key(rec.entry);
    for (const auto& r : records_) {
        if (r.canonical_key == rec.canonical_key &&
            constraint_signature(r.entry) == constraint_signature(rec.entry))
            throw std::runtime_error("duplicate db record: key already present under id " +
                                     r.entry.id);
    }
    records_.push_back(std::move(rec));
}

std::vector<DbRecord> DbStore::db_scan_for_new(size_t max_candidates) const {
    std::vector<DbRecord> out;
    std::set<std::string> seen;
    for (const auto& r : records_) seen.insert(r.canonical_key);

    auto known = [&](const HypSpec& s) {
        std::string key = orbit_key(s);
        for (const auto& r : records_)
            if (r.canonical_key == key) return true;
        return false;
    };

    for (const auto& rel : shipped_relations()) {
        if (rel.terms.size() < 3) continue; // two-term relations add no new member
        for (const auto& rec : records_) {
            if (rec.entry.lhs->kind != ExprKind::Hyp) continue;
            const HypSpec& lhs = rec.entry.lhs->hyp;
            for (size_t i = 0; i < rel.terms.size(); ++i) {
                auto u = unify_specs(rel.terms[i].second, lhs);
                if (!u) continue;
                // instantiate the other terms and count unknowns
                std::vector<std::pair<ExprPtr, HypSpec>> others;
                size_t unknowns = 0;
                size_t unknown_idx = 0;
                for (size_t j = 0; j < rel.terms.size(); ++j) {
                    if (j == i) continue;
                    HypSpec s = rel.terms[j].second.substitute(*u);
                    ExprPtr c = expr_substitute(rel.terms[j].first, *u);
                    if (!known(s)) {
                        ++unknowns;
                        unknown_idx = others.size();
                    }
                    others.push_back({c, s});
                }
                if (unknowns != 1) continue;
                const auto& [cu, su] = others[unknown_idx];
                std::string key = orbit_key(su);
                if (!seen.insert(key).second) continue;
                // solve the relation for the unknown term
                std::vector<ExprPtr> rest{mul(expr_substitute(rel.terms[i].first, *u),
                                              hyp_expr(lhs))};
                for (size_t j = 0; j < others.size(); ++j)
                    if (j != unknown_idx)
                        rest.push_back(mul(others[j].first, hyp_expr(others[j].second)));
                if (rel.inhomogeneous) rest.push_back(expr_substitute(rel.inhomogeneous, *u));
                ExprPtr rhs = divf(negate(add(std::move(rest))), cu);
                DbRecord cand;
                cand.entry.id = "cand_" + rel.id + "_" + rec.entry.id + "_" + std::to_string(i);
                cand.entry.decls = rec.entry.decls;
                cand.entry.constraints = rec.entry.constraints;
                cand.entry.lhs = hyp_expr(su);
                cand.entry.rhs = rhs;
                cand.entry.ref = "scan candidate; unresolved term solved from " + rel.id +
                                 " against " + rec.entry.id + "; not verified";
                cand.canonical_key = key;
                cand.provenance = "scan:" + rel.id + "+" + rec.entry.id;
                out.push_back(std::move(cand));
                if (out.size() >= max_candidates) return out;
            }
        }
    }
    return out;
}

} // namespace hyp
