#include "hyp/textio.hpp"

#include <cctype>
#include <sstream>

namespace hyp {

namespace {

struct Token {
    enum Type { Num, Ident, HypHead, Punct, End } type = End;
    std::string text;
    SourceSpan span;
};

class Lexer {
public:
    explicit Lexer(const std::string& s) : s_(s) { advance(); }
    const Token& peek() const { return tok_; }
    Token next() {
        Token t = tok_;
        advance();
        return t;
    }

private:
    void advance() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        tok_.span = {1, static_cast<int>(pos_) + 1, static_cast<int>(pos_) + 1};
        if (pos_ >= s_.size()) {
            tok_.type = Token::End;
            tok_.text.clear();
            return;
        }
        char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            // pFq head: digits 'F' digits '('
            if (pos_ < s_.size() && s_[pos_] == 'F') {
                size_t save = pos_;
                ++pos_;
                size_t qstart = pos_;
                while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
                if (pos_ > qstart && pos_ < s_.size() && s_[pos_] == '(') {
                    tok_.type = Token::HypHead;
                    tok_.text = s_.substr(start, pos_ - start);
                    tok_.span.col_end = static_cast<int>(pos_);
                    return;
                }
                pos_ = save;
            }
            tok_.type = Token::Num;
            tok_.text = s_.substr(start, pos_ - start);
            tok_.span.col_end = static_cast<int>(pos_);
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos_;
            while (pos_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
                ++pos_;
            tok_.type = Token::Ident;
            tok_.text = s_.substr(start, pos_ - start);
            tok_.span.col_end = static_cast<int>(pos_);
            return;
        }
        tok_.type = Token::Punct;
        tok_.text = std::string(1, c);
        ++pos_;
        tok_.span.col_end = static_cast<int>(pos_);
    }

    const std::string& s_;
    size_t pos_ = 0;
    Token tok_;
};

class Parser {
public:
    explicit Parser(const std::string& s) : lex_(s) {}

    ExprPtr parse_full() {
        ExprPtr e = expr();
        expect_end();
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, lex_.peek().span); }

    bool accept(const std::string& p) {
        if (lex_.peek().type == Token::Punct && lex_.peek().text == p) {
            lex_.next();
            return true;
        }
        return false;
    }

    void expect(const std::string& p) {
        if (!accept(p)) fail("expected '" + p + "', found '" + lex_.peek().text + "'");
    }

    void expect_end() {
        if (lex_.peek().type != Token::End)
            fail("trailing input '" + lex_.peek().text + "'");
    }

    ExprPtr expr() {
        ExprPtr e = term();
        for (;;) {
            if (accept("+")) e = add(e, term());
            else if (accept("-")) e = sub(e, term());
            else return e;
        }
    }

    ExprPtr term() {
        ExprPtr e = factor();
        for (;;) {
            if (accept("*")) e = mul(e, factor());
            else if (accept("/")) e = divf(e, factor());
            else return e;
        }
    }

    ExprPtr factor() {
        if (accept("-")) return negate(factor());
        return power();
    }

    ExprPtr power() {
        ExprPtr base = primary();
        if (accept("^")) {
            ExprPtr ex = factor(); // right-associative
            return powf(base, ex);
        }
        return base;
    }

    LinForm expr_as_linform() {
        ExprPtr e = expr();
        auto f = as_linform(e);
        if (!f) fail("expected an affine form, found '" + e->str() + "'");
        return *f;
    }

    ExprPtr primary() {
        const Token& t = lex_.peek();
        switch (t.type) {
            case Token::Num: {
                Token n = lex_.next();
                return lit(Rat::parse(n.text));
            }
            case Token::HypHead: {
                Token h = lex_.next();
                return hyp_tail(h);
            }
            case Token::Ident: {
                Token id = lex_.next();
                return ident_tail(id);
            }
            case Token::Punct:
                if (t.text == "(") {
                    lex_.next();
                    ExprPtr e = expr();
                    expect(")");
                    return e;
                }
                fail("unexpected '" + t.text + "'");
            default:
                fail("unexpected end of input");
        }
    }

    ExprPtr hyp_tail(const Token& head) {
        auto fpos = head.text.find('F');
        int p = std::stoi(head.text.substr(0, fpos));
        int q = std::stoi(head.text.substr(fpos + 1));
        expect("(");
        HypSpec spec;
        spec.tops.push_back(expr_as_linform());
        while (accept(",")) spec.tops.push_back(expr_as_linform());
        expect(";");
        spec.bottoms.push_back(expr_as_linform());
        while (accept(",")) spec.bottoms.push_back(expr_as_linform());
        expect(")");
        if (static_cast<int>(spec.tops.size()) != p || static_cast<int>(spec.bottoms.size()) != q)
            throw ParseError("pFq arity mismatch in " + head.text, head.span);
        return hyp_expr(std::move(spec));
    }

    ExprPtr ident_tail(const Token& id) {
        const std::string& name = id.text;
        if (name == "pi") return pi_const();
        if (name == "eg") return euler_gamma();
        if (name == "G") return catalan_g();
        if (name == "inf") throw ParseError("'inf' is only valid as a sum bound", id.span);
        if (lex_.peek().type == Token::Punct && lex_.peek().text == "(") {
            lex_.next();
            if (name == "Gamma") return call1([&] { return gammaf(arg()); });
            if (name == "sin") return call1([&] { return sinf(arg()); });
            if (name == "cos") return call1([&] { return cosf(arg()); });
            if (name == "ln") return call1([&] { return lnf(arg()); });
            if (name == "sqrt") return call1([&] { return sqrtf_(arg()); });
            if (name == "arctanh") return call1([&] { return arctanhf(arg()); });
            if (name == "psi") {
                ExprPtr a = arg();
                if (accept(",")) {
                    ExprPtr b = arg();
                    if (a->kind != ExprKind::RatLit || !a->rat.is_integer() || a->rat.sign() < 0)
                        throw ParseError("psi derivative order must be a nonnegative integer",
                                         id.span);
                    expect(")");
                    return polygamma(static_cast<int>(a->rat.as_long()), b);
                }
                expect(")");
                return polygamma(0, a);
            }
            if (name == "binom" || name == "poch") {
                ExprPtr a = arg();
                expect(",");
                ExprPtr b = arg();
                expect(")");
                return name == "binom" ? binom(a, b) : pochhammer(a, b);
            }
            if (name == "sum") {
                if (lex_.peek().type != Token::Ident)
                    fail("sum index must be a symbol name");
                std::string idx = lex_.next().text;
                expect(",");
                LinForm lo = expr_as_linform();
                expect(",");
                bool infinite = false;
                LinForm hi;
                if (lex_.peek().type == Token::Ident && lex_.peek().text == "inf") {
                    lex_.next();
                    infinite = true;
                } else {
                    hi = expr_as_linform();
                }
                expect(",");
                ExprPtr body = expr();
                expect(")");
                return infinite ? sum_expr_inf(idx, lo, body) : sum_expr(idx, lo, hi, body);
            }
            throw ParseError("unknown function '" + name + "'", id.span);
        }
        return sym(name);
    }

    ExprPtr arg() { return expr(); }

    template <typename F>
    ExprPtr call1(F f) {
        ExprPtr e = f();
        expect(")");
        return e;
    }

    Lexer lex_;
};

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;
    for (char c : s) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == sep && depth == 0) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

} // namespace

ExprPtr parse_expr(const std::string& text) { return Parser(text).parse_full(); }

LinForm parse_linform(const std::string& text) {
    ExprPtr e = parse_expr(text);
    auto f = as_linform(e);
    if (!f) throw ParseError("not an affine form: " + text, {1, 1, static_cast<int>(text.size())});
    return *f;
}

std::string print_expr(const ExprPtr& e) { return e->str(); }

std::string Constraint::str() const {
    const char* ops[] = {"=", "!=", "<=", ">=", "<", ">"};
    return lhs.str() + " " + ops[static_cast<int>(op)] + " " + rhs.str();
}

std::vector<SymbolDecl> parse_decls(const std::string& text) {
    std::vector<SymbolDecl> out;
    if (trim(text).empty()) return out;
    for (const auto& piece : split(text, ',')) {
        std::string p = trim(piece);
        if (p.empty()) continue;
        SymbolDecl d;
        auto defpos = p.find(":=");
        std::string head = p;
        if (defpos != std::string::npos) {
            head = trim(p.substr(0, defpos));
            d.definition = parse_expr(trim(p.substr(defpos + 2)));
        }
        auto colon = head.find(':');
        if (colon == std::string::npos) {
            d.name = trim(head);
            d.kind = SymbolKind::Real;
        } else {
            d.name = trim(head.substr(0, colon));
            std::string kind = trim(head.substr(colon + 1));
            auto br = kind.find('[');
            if (br != std::string::npos) {
                std::string range = kind.substr(br + 1, kind.find(']') - br - 1);
                auto dots = range.find("..");
                d.lo = std::stol(range.substr(0, dots));
                d.hi = std::stol(range.substr(dots + 2));
                kind = trim(kind.substr(0, br));
            }
            if (kind == "real") d.kind = SymbolKind::Real;
            else if (kind == "complex") d.kind = SymbolKind::Complex;
            else if (kind == "posint") d.kind = SymbolKind::PositiveInteger;
            else if (kind == "nonnegint") d.kind = SymbolKind::NonnegativeInteger;
            else throw ParseError("unknown symbol kind '" + kind + "'", {1, 1, 1});
        }
        if (d.name.empty()) throw ParseError("empty symbol name in decls", {1, 1, 1});
        out.push_back(std::move(d));
    }
    return out;
}

std::vector<Constraint> parse_constraints(const std::string& text) {
    std::vector<Constraint> out;
    if (trim(text).empty()) return out;
    for (const auto& piece : split(text, ';')) {
        std::string p = trim(piece);
        if (p.empty()) continue;
        static const std::pair<const char*, ConstraintOp> ops[] = {
            {"!=", ConstraintOp::Ne}, {"<=", ConstraintOp::Le}, {">=", ConstraintOp::Ge},
            {"=", ConstraintOp::Eq},  {"<", ConstraintOp::Lt},  {">", ConstraintOp::Gt},
        };
        size_t pos = std::string::npos;
        ConstraintOp op = ConstraintOp::Eq;
        size_t oplen = 0;
        for (const auto& [tok, o] : ops) {
            size_t q = p.find(tok);
            if (q != std::string::npos && q < pos) {
                pos = q;
                op = o;
                oplen = std::string(tok).size();
            }
        }
        if (pos == std::string::npos)
            throw ParseError("constraint missing relational operator: " + p, {1, 1, 1});
        Constraint c;
        c.lhs = parse_linform(trim(p.substr(0, pos)));
        c.op = op;
        c.rhs = parse_linform(trim(p.substr(pos + oplen)));
        out.push_back(std::move(c));
    }
    return out;
}

std::string print_decls(const std::vector<SymbolDecl>& decls) {
    std::ostringstream os;
    bool first = true;
    for (const auto& d : decls) {
        if (!first) os << ", ";
        first = false;
        os << d.name << ":";
        switch (d.kind) {
            case SymbolKind::Real: os << "real"; break;
            case SymbolKind::Complex: os << "complex"; break;
            case SymbolKind::PositiveInteger: os << "posint"; break;
            case SymbolKind::NonnegativeInteger: os << "nonnegint"; break;
        }
        if (d.lo && d.hi) os << "[" << *d.lo << ".." << *d.hi << "]";
        if (d.definition) os << " := " << d.definition->str();
    }
    return os.str();
}

std::string print_constraints(const std::vector<Constraint>& cs) {
    std::ostringstream os;
    for (size_t i = 0; i < cs.size(); ++i) os << (i ? "; " : "") << cs[i].str();
    return os.str();
}

EntryStatus IdentityEntry::status() const {
    if (contains_hyp(rhs)) return EntryStatus::Transformation;
    if (contains_sum(rhs)) return EntryStatus::Summable;
    return EntryStatus::Closed;
}

const SymbolDecl* IdentityEntry::find_decl(const std::string& name) const {
    for (const auto& d : decls)
        if (d.name == name) return &d;
    return nullptr;
}

namespace {
void check_declared(const std::vector<SymbolDecl>& decls, const ExprPtr& e,
                    const std::string& where) {
    std::vector<std::string> syms;
    collect_symbols(e, syms);
    for (const auto& s : syms) {
        bool found = false;
        for (const auto& d : decls)
            if (d.name == s) found = true;
        if (!found)
            throw ParseError("undeclared symbol '" + s + "' in " + where, {1, 1, 1});
    }
}
} // namespace

IdentityEntry parse_identity_record(const std::string& line) {
    auto fields = split(line, '|');
    if (fields.size() != 6 && fields.size() != 7)
        throw ParseError("identity record needs 6 fields (id|decls|constraints|lhs|rhs|ref), got " +
                             std::to_string(fields.size()),
                         {1, 1, static_cast<int>(line.size())});
    IdentityEntry e;
    e.id = trim(fields[0]);
    if (e.id.empty()) throw ParseError("identity record with empty id", {1, 1, 1});
    e.decls = parse_decls(fields[1]);
    e.constraints = parse_constraints(fields[2]);
    e.lhs = parse_expr(trim(fields[3]));
    e.rhs = parse_expr(trim(fields[4]));
    e.ref = trim(fields[5]);
    if (fields.size() == 7) e.note = trim(fields[6]);
    check_declared(e.decls, e.lhs, "lhs of " + e.id);
    check_declared(e.decls, e.rhs, "rhs of " + e.id);
    for (const auto& c : e.constraints) {
        for (const auto& f : {c.lhs, c.rhs})
            for (const auto& s : f.symbols())
                if (s != "balance" && !([&] {
                        for (const auto& d : e.decls)
                            if (d.name == s) return true;
                        return false;
                    }()))
                    throw ParseError("undeclared symbol '" + s + "' in constraints of " + e.id,
                                     {1, 1, 1});
    }
    if (auto err = kind_check(e.lhs, e.decls))
        throw ParseError(*err + " in lhs of " + e.id, {1, 1, 1});
    if (auto err = kind_check(e.rhs, e.decls))
        throw ParseError(*err + " in rhs of " + e.id, {1, 1, 1});
    return e;
}

std::string print_identity_record(const IdentityEntry& e) {
    std::ostringstream os;
    os << e.id << " | " << print_decls(e.decls) << " | " << print_constraints(e.constraints)
       << " | " << e.lhs->str() << " | " << e.rhs->str() << " | " << e.ref;
    if (!e.note.empty()) os << " | " << e.note;
    return os.str();
}

ContigRelation parse_relation_record(const std::string& line) {
    auto fields = split(line, '|');
    if (fields.size() != 6)
        throw ParseError("relation record needs 6 fields (id|decls|constraints|terms|inhom|ref)",
                         {1, 1, static_cast<int>(line.size())});
    ContigRelation r;
    r.id = trim(fields[0]);
    r.decls = parse_decls(fields[1]);
    r.constraints = parse_constraints(fields[2]);
    for (const auto& piece : split(fields[3], ';')) {
        std::string p = trim(piece);
        if (p.empty()) continue;
        auto tilde = p.find('~');
        if (tilde == std::string::npos)
            throw ParseError("relation term needs 'coeff ~ spec': " + p, {1, 1, 1});
        ExprPtr coeff = parse_expr(trim(p.substr(0, tilde)));
        ExprPtr spec = parse_expr(trim(p.substr(tilde + 1)));
        if (spec->kind != ExprKind::Hyp)
            throw ParseError("relation term right side must be a pFq spec: " + p, {1, 1, 1});
        if (contains_hyp(coeff))
            throw ParseError("relation coefficient must be free of pFq nodes: " + p, {1, 1, 1});
        r.terms.emplace_back(coeff, spec->hyp);
    }
    if (r.terms.size() < 2)
        throw ParseError("relation needs at least two terms: " + r.id, {1, 1, 1});
    std::string inhom = trim(fields[4]);
    if (!inhom.empty() && inhom != "0") r.inhomogeneous = parse_expr(inhom);
    r.ref = trim(fields[5]);
    return r;
}

std::string print_relation_record(const ContigRelation& r) {
    std::ostringstream os;
    os << r.id << " | " << print_decls(r.decls) << " | " << print_constraints(r.constraints)
       << " | ";
    for (size_t i = 0; i < r.terms.size(); ++i) {
        if (i) os << " ; ";
        os << r.terms[i].first->str() << " ~ " << r.terms[i].second.str();
    }
    os << " | " << (r.inhomogeneous ? r.inhomogeneous->str() : std::string("0")) << " | " << r.ref;
    return os.str();
}

std::optional<std::string> kind_check(const ExprPtr& e, const std::vector<SymbolDecl>& decls) {
    auto is_integer_kind = [&](const std::string& name) {
        for (const auto& d : decls)
            if (d.name == name)
                return d.kind == SymbolKind::PositiveInteger ||
                       d.kind == SymbolKind::NonnegativeInteger;
        return false;
    };
    if (e->kind == ExprKind::Neg1Pow) {
        if (!e->form.constant().is_integer())
            return "(-1)^ exponent has non-integer constant part: " + e->form.str();
        for (const auto& [name, coeff] : e->form.terms()) {
            if (!coeff.is_integer())
                return "(-1)^ exponent has non-integer coefficient on '" + name + "'";
            if (!is_integer_kind(name))
                return "(-1)^ exponent uses non-integer symbol '" + name + "'";
        }
    }
    if (e->kind == ExprKind::Sum) {
        std::vector<SymbolDecl> inner = decls;
        SymbolDecl idx;
        idx.name = e->index;
        idx.kind = SymbolKind::NonnegativeInteger;
        inner.push_back(idx);
        return kind_check(e->kids[0], inner);
    }
    for (const auto& k : e->kids)
        if (auto err = kind_check(k, decls)) return err;
    return std::nullopt;
}

} // namespace hyp
