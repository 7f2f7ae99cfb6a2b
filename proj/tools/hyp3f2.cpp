// Command-line front end: evaluation, classification, transformation, orbit
// and relatedness queries, catalog matching, verification, digamma reduction
// and database operations over the textio record grammar.

#include <CLI11.hpp>

#include "hyp/catalog.hpp"
#include "hyp/contiguity.hpp"
#include "hyp/dbstore.hpp"
#include "hyp/hypseries.hpp"
#include "hyp/orbit.hpp"
#include "hyp/psirational.hpp"
#include "hyp/textio.hpp"
#include "hyp/transforms.hpp"
#include "hyp/verify.hpp"

#include <iostream>

using namespace hyp;

namespace {

constexpr int kExitVerifyFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitEval = 3;

std::map<std::string, Rat> parse_bindings(const std::string& s) {
    std::map<std::string, Rat> out;
    if (s.empty()) return out;
    std::istringstream in(s);
    std::string piece;
    while (std::getline(in, piece, ',')) {
        auto eq = piece.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("binding needs name=value: " + piece);
        std::string name = piece.substr(0, eq);
        name.erase(remove_if(name.begin(), name.end(), ::isspace), name.end());
        out[name] = Rat::parse(piece.substr(eq + 1));
    }
    return out;
}

HypSpec spec_arg(const std::string& text) {
    ExprPtr e = parse_expr(text);
    if (e->kind != ExprKind::Hyp)
        throw std::runtime_error("expected a pFq spec, got: " + text);
    return e->hyp;
}

std::set<RuleSet> rules_arg(const std::string& s) {
    std::set<RuleSet> out;
    std::istringstream in(s);
    std::string piece;
    while (std::getline(in, piece, ',')) {
        if (piece == "thomae") out.insert(RuleSet::Thomae);
        else if (piece == "rjrjr") out.insert(RuleSet::Rjrjr);
        else if (piece == "reverse") out.insert(RuleSet::Reverse);
        else throw std::runtime_error("unknown rule set: " + piece);
    }
    if (out.empty()) out.insert(RuleSet::Thomae);
    return out;
}

const char* class_name(SeriesKind k) {
    switch (k) {
        case SeriesKind::Terminating: return "terminating";
        case SeriesKind::Convergent: return "convergent";
        case SeriesKind::Divergent: return "divergent";
        case SeriesKind::Degenerate: return "degenerate";
    }
    return "?";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"hypergeometric 3F2(1) toolkit"};
    app.require_subcommand(1);

    int prec = 40;
    unsigned long seed = 20250930;
    std::string db_path, format = "text", bind_text;
    app.add_option("--prec", prec, "working precision in decimal digits");
    app.add_option("--seed", seed, "sampler seed");
    app.add_option("--db", db_path, "database file");
    app.add_option("--format", format, "text|records");

    std::string expr_text;
    auto* eval_cmd = app.add_subcommand("eval", "evaluate an expression numerically");
    eval_cmd->add_option("expr", expr_text)->required();
    eval_cmd->add_option("--bind", bind_text, "symbol bindings, e.g. a=1/2,n=3");

    std::string cls_text, cls_bind;
    auto* cls_cmd = app.add_subcommand("classify", "classify a pFq(1) spec");
    cls_cmd->add_option("spec", cls_text)->required();
    cls_cmd->add_option("--bind", cls_bind);

    std::string tr_rule, tr_spec, tr_nsym = "n";
    auto* tr_cmd = app.add_subcommand("transform", "apply a transformation rule");
    tr_cmd->add_option("rule", tr_rule, "thom1..thom9, ra1p..raB, reverse")->required();
    tr_cmd->add_option("spec", tr_spec)->required();
    tr_cmd->add_option("--n", tr_nsym, "terminating symbol name");

    std::string orb_spec, orb_rules = "thomae";
    int orb_depth = 6;
    auto* orb_cmd = app.add_subcommand("orbit", "closure under a transformation set");
    orb_cmd->add_option("spec", orb_spec)->required();
    orb_cmd->add_option("--rules", orb_rules, "thomae,rjrjr,reverse");
    orb_cmd->add_option("--depth", orb_depth);

    std::string rel_a, rel_b, rel_rules = "thomae";
    auto* rel_cmd = app.add_subcommand("related", "decide relatedness of two specs");
    rel_cmd->add_option("lhs", rel_a)->required();
    rel_cmd->add_option("rhs", rel_b)->required();
    rel_cmd->add_option("--rules", rel_rules);

    std::string match_spec, match_bind;
    auto* match_cmd = app.add_subcommand("match", "match a spec against the catalog");
    match_cmd->add_option("spec", match_spec)->required();
    match_cmd->add_option("--bind", match_bind);

    std::string verify_id;
    bool verify_all = false;
    int trials = 10, tol = 30;
    auto* ver_cmd = app.add_subcommand("verify", "verify catalog entries numerically");
    ver_cmd->add_option("id", verify_id, "entry id");
    ver_cmd->add_flag("--all", verify_all, "verify the whole catalog");
    ver_cmd->add_option("--trials", trials);
    ver_cmd->add_option("--tol", tol, "tolerance digits");

    std::string psi_query;
    auto* psi_cmd = app.add_subcommand("psi", "digamma reduction at rational arguments");
    psi_cmd->add_option("query", psi_query, "p/q or an expression like psi(5/8)-psi(1/8)")
        ->required();

    std::string db_verb, db_arg;
    auto* db_cmd = app.add_subcommand("db", "database operations: lookup|add|scan|init");
    db_cmd->add_option("verb", db_verb)->required();
    db_cmd->add_option("arg", db_arg, "spec (lookup) or record line (add)");

    for (auto* sc : app.get_subcommands([](CLI::App*) { return true; })) sc->fallthrough();
    CLI11_PARSE(app, argc, argv);

    try {
        if (*eval_cmd) {
            EvalContext ctx;
            ctx.digits = prec;
            ctx.binding = parse_bindings(bind_text);
            ctx.sigma_min = Rat(1, 20);
            BigFloat v = eval_expr(parse_expr(expr_text), ctx);
            std::cout << v.str(prec) << "\n";
            return 0;
        }
        if (*cls_cmd) {
            auto spec = spec_arg(cls_text);
            auto cls = classify(spec, parse_bindings(cls_bind));
            if (format == "records") {
                std::cout << class_name(cls.kind) << " | length=" << cls.length
                          << " | excess=" << cls.excess_value.str() << "\n";
            } else {
                std::cout << class_name(cls.kind);
                if (cls.kind == SeriesKind::Terminating)
                    std::cout << ", length " << cls.length;
                std::cout << ", excess " << cls.excess_value.str() << "\n";
            }
            return 0;
        }
        if (*tr_cmd) {
            auto r = apply_rule(tr_rule, spec_arg(tr_spec), tr_nsym);
            std::cout << r.prefactor->str() << " | " << r.image.str() << "\n";
            return 0;
        }
        if (*orb_cmd) {
            auto orb = orbit_closure(spec_arg(orb_spec), rules_arg(orb_rules), orb_depth);
            for (const auto& m : orb.members) std::cout << m.key << "\n";
            if (orb.incomplete) std::cout << "# incomplete (depth limit reached)\n";
            return 0;
        }
        if (*rel_cmd) {
            auto v = related(spec_arg(rel_a), spec_arg(rel_b), rules_arg(rel_rules));
            if (!v.related) {
                std::cout << "not related" << (v.incomplete ? " (incomplete search)" : "") << "\n";
                return 0;
            }
            std::cout << "related";
            for (const auto& st : v.chain) {
                std::cout << " | " << st.rule << " tops=(";
                for (size_t i = 0; i < st.top_perm.size(); ++i)
                    std::cout << (i ? "," : "") << st.top_perm[i];
                std::cout << ") bottoms=(";
                for (size_t i = 0; i < st.bottom_perm.size(); ++i)
                    std::cout << (i ? "," : "") << st.bottom_perm[i];
                std::cout << ")";
            }
            std::cout << "\n";
            return 0;
        }
        if (*match_cmd) {
            std::optional<std::map<std::string, Rat>> b;
            if (!match_bind.empty()) b = parse_bindings(match_bind);
            auto results = Catalog::shipped().match(spec_arg(match_spec), b);
            for (const auto& m : results) {
                std::cout << m.entry_id << " |";
                for (const auto& [k, f] : m.unifier) std::cout << " " << k << ":=" << f.str();
                std::cout << "\n";
            }
            if (results.empty()) std::cout << "no match\n";
            return 0;
        }
        if (*ver_cmd) {
            VerifyOptions opts;
            opts.trials = trials;
            opts.precision = prec;
            opts.tolerance_digits = tol;
            opts.seed = seed;
            const Catalog& cat = Catalog::shipped();
            bool all_ok = true;
            if (verify_all) {
                for (const auto* ce : cat.list_entries("")) {
                    VerifyReport rep = verify_entry(cat, ce->entry.id, opts);
                    std::cout << rep.str() << "\n";
                    all_ok = all_ok && rep.passed();
                }
            } else if (!verify_id.empty()) {
                VerifyReport rep = verify_entry(cat, verify_id, opts);
                std::cout << rep.str() << "\n";
                all_ok = rep.passed();
            } else {
                std::cerr << "verify needs an entry id or --all\n";
                return kExitUsage;
            }
            return all_ok ? 0 : kExitVerifyFailure;
        }
        if (*psi_cmd) {
            // table hit first, then the Gauss expansion
            if (auto hit = psi_constants_lookup(psi_query)) {
                std::cout << (*hit)->str() << "\n";
                return 0;
            }
            auto slash = psi_query.find('/');
            if (slash != std::string::npos && psi_query.find('(') == std::string::npos) {
                long p = std::stol(psi_query.substr(0, slash));
                long q = std::stol(psi_query.substr(slash + 1));
                std::cout << psi_rational(p, q)->str() << "\n";
                return 0;
            }
            // difference pattern psi(p1/q)-psi(p2/q)
            ExprPtr e = parse_expr(psi_query);
            if (e->kind == ExprKind::Add && e->kids.size() == 2) {
                const ExprPtr* pos = nullptr;
                const ExprPtr* neg = nullptr;
                for (const auto& k : e->kids) {
                    if (k->kind == ExprKind::Polygamma && k->order == 0) pos = &k;
                    if (k->kind == ExprKind::Mul && k->kids.size() == 2 &&
                        k->kids[0]->kind == ExprKind::RatLit && k->kids[0]->rat == Rat(-1) &&
                        k->kids[1]->kind == ExprKind::Polygamma && k->kids[1]->order == 0)
                        neg = &k->kids[1];
                }
                if (pos && neg && (*pos)->kids[0]->kind == ExprKind::RatLit &&
                    (*neg)->kids[0]->kind == ExprKind::RatLit) {
                    Rat x = (*pos)->kids[0]->rat;
                    Rat y = (*neg)->kids[0]->rat;
                    if (x.den() == y.den()) {
                        std::cout << psi_rational_diff(x.num().get_si(), y.num().get_si(),
                                                       x.den().get_si())
                                         ->str()
                                  << "\n";
                        return 0;
                    }
                }
            }
            std::cerr << "unsupported psi query\n";
            return kExitUsage;
        }
        if (*db_cmd) {
            if (db_verb == "init") {
                if (db_path.empty()) {
                    std::cerr << "db init needs --db FILE\n";
                    return kExitUsage;
                }
                DbStore::seeded().save(db_path);
                std::cout << "wrote " << DbStore::seeded().records().size() << " records\n";
                return 0;
            }
            DbStore db = db_path.empty() ? DbStore::seeded() : DbStore::load(db_path);
            if (db_verb == "lookup") {
                auto found = db.db_lookup(spec_arg(db_arg));
                for (const auto* r : found)
                    std::cout << r->entry.id << " | " << r->provenance << "\n";
                if (found.empty()) std::cout << "no record\n";
                return 0;
            }
            if (db_verb == "add") {
                db.db_add(DbStore::parse_record_line(db_arg));
                if (!db_path.empty()) db.save(db_path);
                std::cout << "added\n";
                return 0;
            }
            if (db_verb == "scan") {
                for (const auto& cand : db.db_scan_for_new())
                    std::cout << DbStore::print_record_line(cand) << "\n";
                return 0;
            }
            std::cerr << "unknown db verb: " << db_verb << "\n";
            return kExitUsage;
        }
    } catch (const EvalError& e) {
        std::cerr << "evaluation error: " << e.what() << "\n";
        return kExitEval;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
