#include "hyp/catalog.hpp"

#include "hyp/hypseries.hpp"
#include "hyp/orbit.hpp"

#include <algorithm>
#include <fstream>

namespace hyp {

namespace {

std::string trim_copy(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

} // namespace

Catalog Catalog::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open catalog file: " + path);
    Catalog cat;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim_copy(line);
        if (t.rfind("#section:", 0) == 0) {
            section = trim_copy(t.substr(9));
            continue;
        }
        auto hash = t.find('#');
        if (hash != std::string::npos) t = trim_copy(t.substr(0, hash));
        if (t.empty()) continue;
        try {
            CatalogEntry ce;
            ce.entry = parse_identity_record(t);
            ce.section = section;
            for (const auto& existing : cat.entries_)
                if (existing.entry.id == ce.entry.id)
                    throw std::runtime_error("duplicate catalog id " + ce.entry.id);
            cat.entries_.push_back(std::move(ce));
        } catch (const std::exception& ex) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + ex.what());
        }
    }
    return cat;
}

const Catalog& Catalog::shipped() {
    static const Catalog cat = load(std::string(HYP_DATA_DIR) + "/catalog.txt");
    return cat;
}

const IdentityEntry* Catalog::find(const std::string& id) const {
    for (const auto& ce : entries_)
        if (ce.entry.id == id) return &ce.entry;
    return nullptr;
}

const CatalogEntry* Catalog::find_full(const std::string& id) const {
    for (const auto& ce : entries_)
        if (ce.entry.id == id) return &ce;
    return nullptr;
}

std::vector<MatchResult> Catalog::match(
    const HypSpec& query, const std::optional<std::map<std::string, Rat>>& binding) const {
    std::vector<MatchResult> out;
    for (const auto& ce : entries_) {
        const IdentityEntry& e = ce.entry;
        if (e.lhs->kind != ExprKind::Hyp) continue;
        auto u = unify_specs(e.lhs->hyp, query);
        if (!u) continue;
        MatchResult m;
        m.entry_id = e.id;
        m.unifier = *u;
        if (binding) {
            // resolve the unifier at the query binding and check constraints
            std::map<std::string, Rat> eb;
            bool ok = true;
            for (const auto& [name, form] : m.unifier) {
                try {
                    eb[name] = form.eval(*binding);
                } catch (const EvalError&) {
                    ok = false;
                    break;
                } catch (const std::exception&) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            try {
                eb = complete_binding(e, eb);
            } catch (const EvalError&) {
                continue;
            }
            if (!constraints_hold(e, eb)) continue;
            for (const auto& c : e.constraints) m.verified_constraints.push_back(c.str());
        } else {
            // symbolic check: a constraint passes when both sides reduce to the
            // same form after the unifier; inequalities with free symbols are
            // reported unverified but do not reject the match
            bool reject = false;
            for (const auto& c : e.constraints) {
                LinForm lhs = c.lhs;
                LinForm rhs = c.rhs;
                if (e.lhs->kind == ExprKind::Hyp) {
                    LinForm excess = parametric_excess(e.lhs->hyp);
                    std::map<std::string, LinForm> bal{{"balance", excess}};
                    lhs = lhs.substitute(bal);
                    rhs = rhs.substitute(bal);
                }
                LinForm diff = lhs.substitute(m.unifier) - rhs.substitute(m.unifier);
                if (diff.is_constant()) {
                    Rat v = diff.constant();
                    bool holds = true;
                    switch (c.op) {
                        case ConstraintOp::Eq: holds = v.is_zero(); break;
                        case ConstraintOp::Ne: holds = !v.is_zero(); break;
                        case ConstraintOp::Le: holds = v <= Rat(0); break;
                        case ConstraintOp::Ge: holds = v >= Rat(0); break;
                        case ConstraintOp::Lt: holds = v < Rat(0); break;
                        case ConstraintOp::Gt: holds = v > Rat(0); break;
                    }
                    if (holds) m.verified_constraints.push_back(c.str());
                    else reject = true;
                }
            }
            if (reject) continue;
        }
        out.push_back(std::move(m));
    }
    return out;
}

std::vector<const CatalogEntry*> Catalog::list_entries(const std::string& filter) const {
    std::vector<const CatalogEntry*> out;
    std::string key, value;
    auto eq = filter.find('=');
    if (eq != std::string::npos) {
        key = filter.substr(0, eq);
        value = filter.substr(eq + 1);
    }
    for (const auto& ce : entries_) {
        bool take = true;
        if (key == "status") {
            EntryStatus st = ce.entry.status();
            const char* name = st == EntryStatus::Closed      ? "closed"
                               : st == EntryStatus::Summable ? "summable"
                                                              : "transformation";
            take = (value == name);
        } else if (key == "section") {
            take = (ce.section == value);
        } else if (!filter.empty()) {
            take = false;
        }
        if (take) out.push_back(&ce);
    }
    std::sort(out.begin(), out.end(), [](const CatalogEntry* a, const CatalogEntry* b) {
        return a->entry.id < b->entry.id;
    });
    return out;
}

std::map<std::string, Rat> complete_binding(const IdentityEntry& e,
                                            std::map<std::string, Rat> binding) {
    for (const auto& d : e.decls) {
        if (d.definition) {
            auto v = eval_exact(d.definition, binding);
            if (!v)
                throw EvalError(EvalErrorCode::BadArgument,
                                "definition of '" + d.name + "' is not exactly rational");
            binding[d.name] = *v;
        }
        auto it = binding.find(d.name);
        if (it == binding.end())
            throw EvalError(EvalErrorCode::UnboundSymbol,
                            "binding misses symbol '" + d.name + "' of entry " + e.id);
        const Rat& v = it->second;
        switch (d.kind) {
            case SymbolKind::PositiveInteger:
                if (!v.is_integer() || v.sign() <= 0)
                    throw EvalError(EvalErrorCode::BadArgument,
                                    "'" + d.name + "' must be a positive integer, got " + v.str());
                break;
            case SymbolKind::NonnegativeInteger:
                if (!v.is_integer() || v.sign() < 0)
                    throw EvalError(EvalErrorCode::BadArgument,
                                    "'" + d.name + "' must be a nonnegative integer, got " +
                                        v.str());
                break;
            default: break;
        }
        if (d.lo && v < Rat(*d.lo))
            throw EvalError(EvalErrorCode::BadArgument, "'" + d.name + "' below declared bound");
        if (d.hi && v > Rat(*d.hi))
            throw EvalError(EvalErrorCode::BadArgument, "'" + d.name + "' above declared bound");
    }
    return binding;
}

bool constraints_hold(const IdentityEntry& e, const std::map<std::string, Rat>& binding) {
    std::map<std::string, Rat> full = binding;
    if (e.lhs->kind == ExprKind::Hyp)
        full["balance"] = parametric_excess(e.lhs->hyp).eval(binding);
    for (const auto& c : e.constraints) {
        Rat l = c.lhs.eval(full);
        Rat r = c.rhs.eval(full);
        bool ok = true;
        switch (c.op) {
            case ConstraintOp::Eq: ok = (l == r); break;
            case ConstraintOp::Ne: ok = (l != r); break;
            case ConstraintOp::Le: ok = (l <= r); break;
            case ConstraintOp::Ge: ok = (l >= r); break;
            case ConstraintOp::Lt: ok = (l < r); break;
            case ConstraintOp::Gt: ok = (l > r); break;
        }
        if (!ok) return false;
    }
    return true;
}

std::pair<BigFloat, BigFloat> instantiate(const IdentityEntry& e,
                                          const std::map<std::string, LinForm>& unifier,
                                          const std::map<std::string, Rat>& binding, int digits) {
    std::map<std::string, Rat> eb;
    for (const auto& [name, form] : unifier) eb[name] = form.eval(binding);
    for (const auto& [name, v] : binding)
        if (!eb.count(name)) eb[name] = v;
    eb = complete_binding(e, eb);
    if (!constraints_hold(e, eb))
        throw EvalError(EvalErrorCode::BadArgument, "constraints violated for entry " + e.id);
    EvalContext ctx;
    ctx.digits = digits;
    ctx.binding = eb;
    ctx.sigma_min = Rat(1, 20); // entries may sit below the default refusal line
    return {eval_expr(e.lhs, ctx), eval_expr(e.rhs, ctx)};
}

std::map<std::string, std::string> load_coverage(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open coverage file: " + path);
    std::map<std::string, std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::string t = trim_copy(line);
        if (t.empty()) continue;
        auto arrow = t.find("->");
        if (arrow == std::string::npos)
            throw std::runtime_error("coverage line needs 'label -> ref': " + t);
        std::string label = trim_copy(t.substr(0, arrow));
        std::string ref = trim_copy(t.substr(arrow + 2));
        if (out.count(label)) throw std::runtime_error("duplicate coverage label " + label);
        out[label] = ref;
    }
    return out;
}

const std::map<std::string, std::string>& shipped_coverage() {
    static const auto cov = load_coverage(std::string(HYP_DATA_DIR) + "/coverage.txt");
    return cov;
}

} // namespace hyp
