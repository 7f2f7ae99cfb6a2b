#pragma once

#include "hyp/expr.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hyp {

struct SourceSpan {
    int line = 1;
    int col_start = 1;
    int col_end = 1;
};

struct ParseError : std::runtime_error {
    SourceSpan span;
    ParseError(const std::string& msg, SourceSpan sp)
        : std::runtime_error(msg + " (line " + std::to_string(sp.line) + ", cols " +
                             std::to_string(sp.col_start) + ".." + std::to_string(sp.col_end) + ")"),
          span(sp) {}
};

enum class SymbolKind { Real, Complex, PositiveInteger, NonnegativeInteger };

struct SymbolDecl {
    std::string name;
    SymbolKind kind = SymbolKind::Real;
    std::optional<long> lo, hi;      // optional integer bounds
    ExprPtr definition;              // derived symbol: value computed from others
};

enum class ConstraintOp { Eq, Ne, Le, Ge, Lt, Gt };

// Affine relation between two forms; "balance" in a form stands for the
// parametric excess of the entry's left-hand spec.
struct Constraint {
    LinForm lhs;
    ConstraintOp op = ConstraintOp::Eq;
    LinForm rhs;
    std::string str() const;
};

enum class EntryStatus { Closed, Summable, Transformation };

struct IdentityEntry {
    std::string id;
    std::vector<SymbolDecl> decls;
    std::vector<Constraint> constraints;
    ExprPtr lhs;
    ExprPtr rhs;
    std::string ref;
    std::string note;

    EntryStatus status() const;
    const SymbolDecl* find_decl(const std::string& name) const;
};

// Three-or-more-term contiguous relation: sum of coeff*value(spec) terms plus
// an optional inhomogeneous part equals zero.
struct ContigRelation {
    std::string id;
    std::vector<SymbolDecl> decls;
    std::vector<Constraint> constraints;
    std::vector<std::pair<ExprPtr, HypSpec>> terms;
    ExprPtr inhomogeneous; // may be null
    std::string ref;
};

ExprPtr parse_expr(const std::string& text);
LinForm parse_linform(const std::string& text);
std::string print_expr(const ExprPtr& e);

std::vector<SymbolDecl> parse_decls(const std::string& text);
std::vector<Constraint> parse_constraints(const std::string& text);
std::string print_decls(const std::vector<SymbolDecl>& decls);
std::string print_constraints(const std::vector<Constraint>& cs);

// One record per line: `id | decls | constraints | lhs | rhs | ref`.
IdentityEntry parse_identity_record(const std::string& line);
std::string print_identity_record(const IdentityEntry& e);

// `id | decls | constraints | coeff ~ spec ; ... | inhom | ref`.
ContigRelation parse_relation_record(const std::string& line);
std::string print_relation_record(const ContigRelation& r);

// Kind check: every Neg1Pow exponent must be integer-valued under the decls
// (integer coefficients on integer-kind symbols, integer constant).
// Returns an error message, or nullopt when the expression is well-kinded.
std::optional<std::string> kind_check(const ExprPtr& e, const std::vector<SymbolDecl>& decls);

} // namespace hyp
