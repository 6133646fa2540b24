#include <charconv>
#include <map>
#include <set>

#include "lexer.hpp"
#include "nl2gql/error.hpp"
#include "nl2gql/gql.hpp"

namespace nl2gql::gql {

namespace {

using detail::Token;
using detail::TokenKind;

bool iequals(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::toupper(static_cast<unsigned char>(a[i])) != std::toupper(static_cast<unsigned char>(b[i]))) {
            return false;
        }
    }
    return true;
}

constexpr std::string_view kKeywords[] = {"MATCH", "WHERE", "WITH",  "RETURN", "ORDER",    "BY",
                                          "ASC",   "DESC",  "LIMIT", "AS",     "AND",      "OR",
                                          "NOT",   "ABS",   "TRUE",  "FALSE",  "CONTAINS", "NULL"};

bool is_keyword(std::string_view word) {
    for (auto kw : kKeywords) {
        if (iequals(word, kw)) return true;
    }
    return false;
}

enum class VarKind { Node, Edge, Value };

struct Var {
    VarKind kind;
    std::string tag;  // node tag or edge type
};

using Scope = std::map<std::string, Var, std::less<>>;

enum class Prev { Start, Match, Where, With, Return, OrderBy, Limit };

class Parser {
public:
    Parser(std::string_view text, ParseOptions options)
        : tokens_(detail::tokenize(text)), options_(options) {}

    Query run() {
        Query q;
        if (at_end()) throw ParseError(0, "empty query");
        Prev prev = Prev::Start;
        bool returned = false;
        bool last_projection_is_with = false;
        while (!at_end()) {
            if (peek_punct(";")) {
                advance();
                if (!at_end()) throw error("unexpected input after ';'");
                break;
            }
            const Token& t = peek();
            if (t.kind != TokenKind::Word) throw error("expected a clause keyword");
            if (iequals(t.text, "MATCH")) {
                if (returned) throw error("MATCH after RETURN");
                if (prev == Prev::Start || prev == Prev::Match || prev == Prev::Where || prev == Prev::With ||
                    ((prev == Prev::OrderBy || prev == Prev::Limit) && last_projection_is_with)) {
                    advance();
                    q.clauses.emplace_back(parse_match());
                    prev = Prev::Match;
                    continue;
                }
                throw error("MATCH not allowed here");
            }
            if (prev == Prev::Start) throw error("query must start with MATCH");
            if (iequals(t.text, "WHERE")) {
                if (prev != Prev::Match && prev != Prev::With) throw error("WHERE must follow MATCH or WITH");
                advance();
                q.clauses.emplace_back(WhereClause{parse_expr()});
                prev = Prev::Where;
            } else if (iequals(t.text, "WITH") || iequals(t.text, "RETURN")) {
                const bool is_with = iequals(t.text, "WITH");
                if (returned) throw error(std::string(is_with ? "WITH" : "RETURN") + " after RETURN");
                advance();
                auto items = parse_projection(is_with);
                if (is_with) {
                    q.clauses.emplace_back(WithClause{std::move(items)});
                    prev = Prev::With;
                } else {
                    q.clauses.emplace_back(ReturnClause{std::move(items)});
                    prev = Prev::Return;
                    returned = true;
                }
                last_projection_is_with = is_with;
            } else if (iequals(t.text, "ORDER")) {
                if (prev != Prev::With && prev != Prev::Return) throw error("ORDER BY must follow WITH or RETURN");
                advance();
                expect_keyword("BY");
                Scope projected = scope_;
                scope_ = pre_projection_scope_;
                for (auto& [k, v] : projected) scope_.insert_or_assign(k, v);
                OrderByClause ob;
                ob.key = parse_expr();
                scope_ = std::move(projected);
                if (peek_keyword("DESC")) {
                    advance();
                    ob.descending = true;
                } else if (peek_keyword("ASC")) {
                    advance();
                }
                q.clauses.emplace_back(std::move(ob));
                prev = Prev::OrderBy;
            } else if (iequals(t.text, "LIMIT")) {
                if (prev != Prev::With && prev != Prev::Return && prev != Prev::OrderBy) {
                    throw error("LIMIT must follow WITH, RETURN or ORDER BY");
                }
                advance();
                const Token& n = peek();
                if (n.kind != TokenKind::Int) throw error("LIMIT expects a non-negative integer");
                q.clauses.emplace_back(LimitClause{parse_int(n)});
                advance();
                prev = Prev::Limit;
            } else {
                throw error("unknown clause '" + t.text + "'");
            }
        }
        if (prev == Prev::Match || prev == Prev::Where) {
            throw ParseError(peek().offset, "query must end with RETURN or WITH");
        }
        return q;
    }

private:
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    ParseOptions options_;
    Scope scope_;
    Scope pre_projection_scope_;
    std::set<std::string, std::less<>> introduced_;

    const Token& peek(std::size_t ahead = 0) const {
        return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
    }
    void advance() {
        if (pos_ + 1 < tokens_.size()) ++pos_;
    }
    bool at_end() const { return peek().kind == TokenKind::End; }

    ParseError error(const std::string& msg) const { return ParseError(peek().offset, msg); }

    bool peek_punct(std::string_view p, std::size_t ahead = 0) const {
        const Token& t = peek(ahead);
        return t.kind == TokenKind::Punct && t.text == p;
    }
    bool peek_keyword(std::string_view kw) const {
        const Token& t = peek();
        return t.kind == TokenKind::Word && iequals(t.text, kw);
    }
    void expect_punct(std::string_view p) {
        if (!peek_punct(p)) throw error("expected '" + std::string(p) + "'");
        advance();
    }
    void expect_keyword(std::string_view kw) {
        if (!peek_keyword(kw)) throw error("expected " + std::string(kw));
        advance();
    }

    // Identifier in a binding position (alias). Keywords are rejected.
    std::string expect_identifier(std::string_view what) {
        const Token& t = peek();
        if (t.kind != TokenKind::Word || is_keyword(t.text)) throw error("expected " + std::string(what));
        std::string s = t.text;
        advance();
        return s;
    }
    // Schema name (tag, edge type, property); keywords allowed.
    std::string expect_name(std::string_view what) {
        const Token& t = peek();
        if (t.kind != TokenKind::Word) throw error("expected " + std::string(what));
        std::string s = t.text;
        advance();
        return s;
    }

    std::int64_t parse_int(const Token& t, bool negative = false) const {
        std::string text = negative ? "-" + t.text : t.text;
        std::int64_t v = 0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc() || ptr != text.data() + text.size()) {
            throw ParseError(t.offset, "integer literal out of range");
        }
        return v;
    }
    double parse_float(const Token& t, bool negative = false) const {
        std::string text = negative ? "-" + t.text : t.text;
        double v = 0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc() || ptr != text.data() + text.size()) {
            throw ParseError(t.offset, "malformed float literal");
        }
        return v;
    }

    void introduce(const std::string& name, Var var, std::size_t offset) {
        if (!introduced_.insert(name).second || scope_.count(name)) {
            throw ParseError(offset, "duplicate alias '" + name + "'");
        }
        scope_.emplace(name, std::move(var));
    }

    MatchClause parse_match() {
        MatchClause m;
        m.nodes.push_back(parse_node());
        while (peek_punct("-") || peek_punct("<")) {
            EdgePattern e;
            if (peek_punct("<")) {
                advance();
                expect_punct("-");
                e.direction = Direction::Incoming;
            } else {
                advance();
            }
            expect_punct("[");
            if (!peek_punct(":")) {
                const std::size_t off = peek().offset;
                e.alias = expect_identifier("edge alias");
                introduce(e.alias, Var{VarKind::Edge, ""}, off);
            }
            expect_punct(":");
            e.edge_type = expect_name("edge type");
            if (!e.alias.empty()) scope_[e.alias].tag = e.edge_type;
            expect_punct("]");
            expect_punct("-");
            if (e.direction == Direction::Outgoing) {
                if (!peek_punct(">")) throw error("undirected edges are not supported; expected '->'");
                advance();
            } else if (peek_punct(">")) {
                throw error("edge cannot point both ways");
            }
            m.edges.push_back(std::move(e));
            m.nodes.push_back(parse_node());
        }
        return m;
    }

    NodePattern parse_node() {
        expect_punct("(");
        NodePattern n;
        std::size_t alias_off = peek().offset;
        if (!peek_punct(":")) n.alias = expect_identifier("node alias");
        if (!peek_punct(":")) throw error("node pattern requires a tag");
        advance();
        n.tag = expect_name("tag");
        if (!n.alias.empty()) introduce(n.alias, Var{VarKind::Node, n.tag}, alias_off);
        if (peek_punct("{")) {
            advance();
            const Token& key = peek();
            if (key.kind != TokenKind::Word || key.text != "name") {
                throw error("only the name property may be filtered inside a node pattern");
            }
            advance();
            expect_punct(":");
            const Token& v = peek();
            if (v.kind != TokenKind::String) throw error("name filter expects a string literal");
            n.name = v.text;
            advance();
            expect_punct("}");
        }
        expect_punct(")");
        return n;
    }

    std::vector<ProjectionItem> parse_projection(bool is_with) {
        std::vector<ProjectionItem> items;
        Scope next;
        std::vector<std::pair<std::string, std::size_t>> new_names;
        do {
            if (!items.empty()) advance();  // ','
            ProjectionItem item;
            const std::size_t expr_off = peek().offset;
            item.expr = parse_expr();
            if (peek_keyword("AS")) {
                advance();
                const std::size_t off = peek().offset;
                item.alias = expect_identifier("alias after AS");
                const bool passthrough =
                    item.expr.kind == ExprKind::Variable && item.expr.name == item.alias;
                if (next.count(item.alias)) throw ParseError(off, "duplicate alias '" + item.alias + "'");
                if (!passthrough) {
                    if (introduced_.count(item.alias)) {
                        throw ParseError(off, "duplicate alias '" + item.alias + "'");
                    }
                    new_names.emplace_back(item.alias, off);
                }
                next.emplace(item.alias, var_of(item.expr));
            } else if (item.expr.kind == ExprKind::Variable) {
                if (next.count(item.expr.name)) {
                    throw ParseError(expr_off, "duplicate alias '" + item.expr.name + "'");
                }
                next.emplace(item.expr.name, var_of(item.expr));
            } else if (is_with) {
                throw ParseError(expr_off, "WITH expressions must be aliased with AS");
            }
            items.push_back(std::move(item));
        } while (peek_punct(","));
        for (auto& [name, off] : new_names) introduced_.insert(name);
        pre_projection_scope_ = std::move(scope_);
        scope_ = std::move(next);
        return items;
    }

    Var var_of(const Expr& e) const {
        if (e.kind == ExprKind::Variable) return scope_.at(e.name);
        return Var{VarKind::Value, ""};
    }

    Expr parse_expr() { return parse_or(); }

    Expr parse_or() {
        Expr lhs = parse_and();
        while (peek_keyword("OR")) {
            advance();
            lhs = Expr::make_binary(ExprKind::Or, std::move(lhs), parse_and());
        }
        return lhs;
    }

    Expr parse_and() {
        Expr lhs = parse_not();
        while (peek_keyword("AND")) {
            advance();
            lhs = Expr::make_binary(ExprKind::And, std::move(lhs), parse_not());
        }
        return lhs;
    }

    Expr parse_not() {
        if (peek_keyword("NOT")) {
            advance();
            return Expr::make_not(parse_not());
        }
        return parse_comparison();
    }

    std::optional<CompareOp> peek_compare() const {
        const Token& t = peek();
        if (t.kind != TokenKind::Punct) return std::nullopt;
        if (t.text == "=") return CompareOp::Eq;
        if (t.text == "<>" || t.text == "!=") return CompareOp::Ne;
        if (t.text == "<") return CompareOp::Lt;
        if (t.text == "<=") return CompareOp::Le;
        if (t.text == ">") return CompareOp::Gt;
        if (t.text == ">=") return CompareOp::Ge;
        return std::nullopt;
    }

    Expr parse_comparison() {
        Expr lhs = parse_additive();
        if (auto op = peek_compare()) {
            advance();
            return Expr::make_compare(*op, std::move(lhs), parse_additive());
        }
        if (peek_keyword("CONTAINS")) {
            advance();
            return Expr::make_binary(ExprKind::Contains, std::move(lhs), parse_additive());
        }
        return lhs;
    }

    Expr parse_additive() {
        Expr lhs = parse_unary();
        while (peek_punct("-")) {
            advance();
            lhs = Expr::make_binary(ExprKind::Subtract, std::move(lhs), parse_unary());
        }
        return lhs;
    }

    Expr parse_unary() {
        if (peek_punct("-")) {
            advance();
            const Token& t = peek();
            if (t.kind == TokenKind::Int) {
                advance();
                return Expr::make_literal(Value(parse_int(t, true)));
            }
            if (t.kind == TokenKind::Float) {
                advance();
                return Expr::make_literal(Value(parse_float(t, true)));
            }
            throw error("unary minus applies to numeric literals only");
        }
        return parse_primary();
    }

    Expr parse_primary() {
        const Token& t = peek();
        switch (t.kind) {
        case TokenKind::Int: {
            advance();
            return Expr::make_literal(Value(parse_int(t)));
        }
        case TokenKind::Float: {
            advance();
            return Expr::make_literal(Value(parse_float(t)));
        }
        case TokenKind::String: {
            Value v(t.text);
            advance();
            return Expr::make_literal(std::move(v));
        }
        case TokenKind::End: throw error("unexpected end of query");
        case TokenKind::Punct: {
            if (t.text == "(") {
                advance();
                Expr inner = parse_expr();
                expect_punct(")");
                return inner;
            }
            if (t.text == "[") {
                if (!options_.allow_placeholders) throw error("unfilled placeholder");
                advance();
                std::string name = expect_name("placeholder name");
                expect_punct("]");
                return Expr::make_placeholder(std::move(name));
            }
            throw error("unexpected '" + t.text + "'");
        }
        case TokenKind::Word: break;
        }
        if (iequals(t.text, "TRUE") || iequals(t.text, "FALSE")) {
            const bool v = iequals(t.text, "TRUE");
            advance();
            return Expr::make_literal(Value(v));
        }
        if (iequals(t.text, "ABS")) {
            advance();
            expect_punct("(");
            Expr inner = parse_expr();
            expect_punct(")");
            return Expr::make_abs(std::move(inner));
        }
        if (is_keyword(t.text)) throw error("unexpected keyword " + t.text);
        const std::size_t off = t.offset;
        std::string name = t.text;
        advance();
        auto it = scope_.find(name);
        if (it == scope_.end()) throw ParseError(off, "unbound alias '" + name + "'");
        if (!peek_punct(".")) return Expr::make_variable(std::move(name));
        advance();
        std::string first = expect_name("property name");
        if (peek_punct(".")) {
            advance();
            std::string prop = expect_name("property name");
            if (it->second.kind != VarKind::Node) {
                throw ParseError(off, "'" + name + "' is not a node; use alias.property for edges");
            }
            return Expr::make_property(std::move(name), std::move(first), std::move(prop));
        }
        if (it->second.kind != VarKind::Edge) {
            throw ParseError(off, "'" + name + "' is not an edge; node properties are written alias.tag.property");
        }
        return Expr::make_property(std::move(name), "", std::move(first));
    }
};

} // namespace

Query parse(std::string_view text, ParseOptions options) { return Parser(text, options).run(); }

} // namespace nl2gql::gql
