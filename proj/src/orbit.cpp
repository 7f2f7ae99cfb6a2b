#include "hyp/orbit.hpp"

#include <algorithm>
#include <deque>

namespace hyp {

namespace {

HypSpec permuted(const HypSpec& s, const std::vector<size_t>& tp, const std::vector<size_t>& bp) {
    HypSpec r;
    for (size_t i : tp) r.tops.push_back(s.tops[i]);
    for (size_t i : bp) r.bottoms.push_back(s.bottoms[i]);
    return r;
}

std::vector<std::vector<size_t>> permutations_of(size_t n) {
    std::vector<size_t> idx(n);
    for (size_t i = 0; i < n; ++i) idx[i] = i;
    std::vector<std::vector<size_t>> out;
    do {
        out.push_back(idx);
    } while (std::next_permutation(idx.begin(), idx.end()));
    return out;
}

// Symbols x whose negation -x appears among the tops (terminating handles).
std::vector<std::string> terminating_symbols(const HypSpec& s) {
    std::vector<std::string> out;
    for (const auto& t : s.tops) {
        if (!t.constant().is_zero() || t.terms().size() != 1) continue;
        const auto& [name, coeff] = *t.terms().begin();
        if (coeff == Rat(-1) && std::find(out.begin(), out.end(), name) == out.end())
            out.push_back(name);
    }
    return out;
}

struct Node {
    HypSpec spec;
    std::vector<ChainStep> chain;
};

// Expands one node into (step, image) pairs under the chosen rule sets.
std::vector<std::pair<ChainStep, HypSpec>> expand(const HypSpec& spec,
                                                  const std::set<RuleSet>& rules) {
    std::vector<std::pair<ChainStep, HypSpec>> out;
    if (spec.tops.size() != 3 || spec.bottoms.size() != 2) return out;
    static const auto tperms = permutations_of(3);
    static const auto bperms = permutations_of(2);
    if (rules.count(RuleSet::Thomae)) {
        for (const auto& id : thomae_rule_ids()) {
            int k = id[4] - '0';
            for (const auto& tp : tperms)
                for (const auto& bp : bperms) {
                    HypSpec p = permuted(spec, tp, bp);
                    auto r = apply_thomae(k, p);
                    out.push_back({ChainStep{id, tp, bp, ""}, r.image});
                }
        }
    }
    bool want_rj = rules.count(RuleSet::Rjrjr);
    bool want_rev = rules.count(RuleSet::Reverse);
    if (want_rj || want_rev) {
        for (const auto& nsym : terminating_symbols(spec)) {
            LinForm neg_n = LinForm::symbol(nsym, Rat(-1));
            size_t pos = 0;
            while (spec.tops[pos] != neg_n) ++pos;
            std::vector<std::string> ids;
            if (want_rj)
                for (const auto& id : rjrjr_rule_ids()) ids.push_back(id);
            if (want_rev && !want_rj) ids.push_back("reverse"); // raB is the reversal
            for (const auto& id : ids) {
                for (const auto& tp : tperms) {
                    if (tp[0] != pos) continue; // the -n slot is fixed
                    for (const auto& bp : bperms) {
                        HypSpec p = permuted(spec, tp, bp);
                        auto r = apply_rjrjr(id, p, nsym);
                        out.push_back({ChainStep{id, tp, bp, nsym}, r.image});
                    }
                }
            }
        }
    }
    return out;
}

std::set<std::string> sets_of_chain(const std::vector<ChainStep>& chain) {
    std::set<std::string> s;
    for (const auto& st : chain) {
        if (st.rule.rfind("thom", 0) == 0) s.insert("thomae");
        else if (st.rule == "reverse") s.insert("reverse");
        else s.insert("rjrjr");
    }
    return s;
}

} // namespace

OrbitResult orbit_closure(const HypSpec& spec, const std::set<RuleSet>& rules, int max_depth,
                          size_t max_nodes) {
    OrbitResult res;
    std::deque<std::pair<HypSpec, int>> queue;
    res.members.insert(CanonicalSpec::of(spec));
    queue.push_back({spec, 0});
    while (!queue.empty()) {
        auto [cur, depth] = queue.front();
        queue.pop_front();
        if (depth >= max_depth) {
            res.incomplete = true;
            continue;
        }
        for (auto& [step, image] : expand(cur, rules)) {
            CanonicalSpec c = CanonicalSpec::of(image);
            if (res.members.insert(c).second) {
                if (res.members.size() > max_nodes) {
                    res.incomplete = true;
                    return res;
                }
                queue.push_back({c.spec, depth + 1});
            }
        }
    }
    return res;
}

Verdict related(const HypSpec& x, const HypSpec& y, const std::set<RuleSet>& rules,
                int max_depth) {
    Verdict v;
    HypSpec ycan = y.canonical();
    // literal comparison: both sides live in one symbol namespace, so a match
    // means multiset equality of the parameter forms
    auto matches = [&](const HypSpec& s) { return s == ycan; };
    if (matches(x)) {
        v.related = true;
        return v;
    }
    std::set<std::string> seen{CanonicalSpec::of(x).key};
    std::deque<Node> queue{{CanonicalSpec::of(x).spec, {}}};
    int depth_reached = 0;
    while (!queue.empty()) {
        Node cur = queue.front();
        queue.pop_front();
        if (static_cast<int>(cur.chain.size()) >= max_depth) {
            v.incomplete = true;
            continue;
        }
        for (auto& [step, image] : expand(cur.spec, rules)) {
            CanonicalSpec c = CanonicalSpec::of(image);
            if (!seen.insert(c.key).second) continue;
            Node nxt{c.spec, cur.chain};
            nxt.chain.push_back(step);
            depth_reached = std::max(depth_reached, static_cast<int>(nxt.chain.size()));
            if (matches(c.spec)) {
                v.related = true;
                v.chain = nxt.chain;
                v.sets_used = sets_of_chain(nxt.chain);
                return v;
            }
            if (seen.size() > 20000) {
                v.incomplete = true;
                return v;
            }
            queue.push_back(std::move(nxt));
        }
    }
    return v;
}

std::pair<ExprPtr, HypSpec> replay_chain(const HypSpec& start,
                                         const std::vector<ChainStep>& chain) {
    HypSpec cur = start;
    ExprPtr pref = lit(1);
    for (const auto& step : chain) {
        // the recorded permutation was chosen against the node's canonical form
        HypSpec canon = cur.canonical();
        HypSpec p = permuted(canon, step.top_perm, step.bottom_perm);
        TransformResult r = apply_rule(step.rule, p, step.n_symbol);
        pref = mul(pref, r.prefactor);
        cur = r.image;
    }
    return {pref, cur};
}

std::optional<std::map<std::string, LinForm>> unify_specs(const HypSpec& pattern,
                                                          const HypSpec& target) {
    if (pattern.tops.size() != target.tops.size() ||
        pattern.bottoms.size() != target.bottoms.size())
        return std::nullopt;

    std::vector<std::string> psyms = pattern.symbols();
    const auto tperms = permutations_of(pattern.tops.size());
    const auto bperms = permutations_of(pattern.bottoms.size());

    for (const auto& tp : tperms) {
        for (const auto& bp : bperms) {
            // match pattern slot i against target slot tp[i]
            std::vector<std::pair<LinForm, LinForm>> eqs; // pattern form ~ target form
            for (size_t i = 0; i < pattern.tops.size(); ++i)
                eqs.push_back({pattern.tops[i], target.tops[tp[i]]});
            for (size_t i = 0; i < pattern.bottoms.size(); ++i)
                eqs.push_back({pattern.bottoms[i], target.bottoms[bp[i]]});

            // solve the linear system over the pattern symbols
            size_t ns = psyms.size();
            std::vector<std::vector<Rat>> A; // rows of coefficients
            std::vector<LinForm> B;
            for (auto& [p, t] : eqs) {
                std::vector<Rat> row(ns, Rat(0));
                for (size_t j = 0; j < ns; ++j) row[j] = p.coeff(psyms[j]);
                A.push_back(row);
                B.push_back(t - LinForm(p.constant()));
            }
            // Gaussian elimination
            size_t rows = A.size();
            std::vector<size_t> pivot_col;
            size_t r = 0;
            for (size_t col = 0; col < ns && r < rows; ++col) {
                size_t piv = r;
                while (piv < rows && A[piv][col].is_zero()) ++piv;
                if (piv == rows) continue;
                std::swap(A[piv], A[r]);
                std::swap(B[piv], B[r]);
                Rat inv = Rat(1) / A[r][col];
                for (size_t j = col; j < ns; ++j) A[r][j] *= inv;
                B[r] = B[r].scaled(inv);
                for (size_t i = 0; i < rows; ++i) {
                    if (i == r || A[i][col].is_zero()) continue;
                    Rat f = A[i][col];
                    for (size_t j = col; j < ns; ++j) A[i][j] -= f * A[r][j];
                    B[i] = B[i] - B[r].scaled(f);
                }
                pivot_col.push_back(col);
                ++r;
            }
            bool ok = true;
            // inconsistent rows
            for (size_t i = r; i < rows; ++i)
                if (!B[i].is_zero()) { ok = false; break; }
            if (!ok) continue;
            std::map<std::string, LinForm> sub;
            std::vector<bool> solved(ns, false);
            for (size_t i = 0; i < r; ++i) {
                // ensure the pivot row has no other nonzero column (no free mixing)
                size_t col = pivot_col[i];
                bool clean = true;
                for (size_t j = 0; j < ns; ++j)
                    if (j != col && !A[i][j].is_zero()) clean = false;
                if (!clean) { ok = false; break; }
                sub[psyms[col]] = B[i];
                solved[col] = true;
            }
            if (!ok) continue;
            for (size_t j = 0; j < ns; ++j)
                if (!solved[j]) sub[psyms[j]] = LinForm::symbol(psyms[j]); // free: identity
            // verify (multiset equality after substitution)
            if (pattern.substitute(sub) == target) return sub;
        }
    }
    return std::nullopt;
}

std::string renamed_key(const HypSpec& spec) {
    HypSpec c = spec.canonical();
    std::vector<std::string> order;
    auto see = [&order](const LinForm& f) {
        for (const auto& [name, _] : f.terms())
            if (std::find(order.begin(), order.end(), name) == order.end())
                order.push_back(name);
    };
    for (const auto& t : c.tops) see(t);
    for (const auto& b : c.bottoms) see(b);
    std::map<std::string, LinForm> ren;
    for (size_t i = 0; i < order.size(); ++i)
        ren[order[i]] = LinForm::symbol("x" + std::to_string(i + 1));
    return c.substitute(ren).canonical().str();
}

std::string orbit_key(const HypSpec& spec) {
    std::set<RuleSet> rules{RuleSet::Thomae};
    if (!terminating_symbols(spec).empty()) {
        rules.insert(RuleSet::Rjrjr);
        rules.insert(RuleSet::Reverse);
    }
    OrbitResult orb = orbit_closure(spec, rules, 4, 4000);
    std::string best;
    for (const auto& m : orb.members) {
        std::string k = renamed_key(m.spec);
        if (best.empty() || k < best) best = k;
    }
    return best;
}

} // namespace hyp
