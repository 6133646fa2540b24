#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "nl2gql/value.hpp"

// Cypher/nGQL subset: MATCH chains of node/edge patterns, WHERE, WITH,
// RETURN, ORDER BY, LIMIT. Node properties are addressed as alias.tag.prop
// and edge properties as alias.prop.
namespace nl2gql::gql {

enum class ExprKind {
    Literal,
    Placeholder,  // bare [name] slot, only accepted when parsing templates
    Property,
    Variable,
    Compare,
    Contains,
    Subtract,
    And,
    Or,
    Not,
    Abs,
};

enum class CompareOp { Eq, Ne, Lt, Le, Gt, Ge };

std::string_view to_string(CompareOp op);

struct Expr {
    ExprKind kind = ExprKind::Literal;
    Value literal;         // Literal
    std::string name;      // Variable name, Property alias, Placeholder name
    std::string tag;       // Property: tag part of alias.tag.prop; empty for alias.prop
    std::string property;  // Property
    CompareOp op = CompareOp::Eq;
    std::vector<Expr> args;

    static Expr make_literal(Value v);
    static Expr make_placeholder(std::string name);
    static Expr make_property(std::string alias, std::string tag, std::string property);
    static Expr make_variable(std::string name);
    static Expr make_compare(CompareOp op, Expr lhs, Expr rhs);
    static Expr make_binary(ExprKind kind, Expr lhs, Expr rhs);
    static Expr make_not(Expr operand);
    static Expr make_abs(Expr operand);

    bool operator==(const Expr&) const = default;
};

enum class Direction { Outgoing, Incoming };  // -[]->  and  <-[]-

struct NodePattern {
    std::string alias;  // may be empty
    std::string tag;
    std::optional<std::string> name;  // {name:'...'} filter

    bool operator==(const NodePattern&) const = default;
};

struct EdgePattern {
    std::string alias;  // may be empty
    std::string edge_type;
    Direction direction = Direction::Outgoing;

    bool operator==(const EdgePattern&) const = default;
};

// nodes.size() == edges.size() + 1; edges[i] links nodes[i] and nodes[i+1].
struct MatchClause {
    std::vector<NodePattern> nodes;
    std::vector<EdgePattern> edges;

    bool operator==(const MatchClause&) const = default;
};

struct WhereClause {
    Expr predicate;
    bool operator==(const WhereClause&) const = default;
};

struct ProjectionItem {
    Expr expr;
    std::string alias;  // empty when no AS

    bool operator==(const ProjectionItem&) const = default;
};

struct WithClause {
    std::vector<ProjectionItem> items;
    bool operator==(const WithClause&) const = default;
};

struct ReturnClause {
    std::vector<ProjectionItem> items;
    bool operator==(const ReturnClause&) const = default;
};

struct OrderByClause {
    Expr key;
    bool descending = false;
    bool operator==(const OrderByClause&) const = default;
};

struct LimitClause {
    std::int64_t count = 0;
    bool operator==(const LimitClause&) const = default;
};

using Clause = std::variant<MatchClause, WhereClause, WithClause, ReturnClause, OrderByClause, LimitClause>;

struct Query {
    std::vector<Clause> clauses;

    bool has_order_by() const;
    bool operator==(const Query&) const = default;
};

struct ParseOptions {
    // Accept bare [slot] placeholders in expression position.
    bool allow_placeholders = false;
};

// Throws ParseError with a byte offset for syntax errors and unbound or
// duplicate aliases.
Query parse(std::string_view text, ParseOptions options = {});

std::string print(const Query& query);
std::string print(const Expr& expr);
std::string print_pattern(const MatchClause& match);

struct ClauseText {
    std::string keyword;    // MATCH, WHERE, WITH, RETURN, ORDER BY, LIMIT
    std::string component;  // canonical text following the keyword

    std::string text() const { return keyword + " " + component; }
    bool operator==(const ClauseText&) const = default;
    auto operator<=>(const ClauseText&) const = default;
};

// One entry per clause; joining text() of each entry with single spaces
// reproduces print(query).
std::vector<ClauseText> split_clauses(const Query& query);

// Alias alpha-renaming (a0, a1, ... in first-occurrence order, unaliased
// pattern elements included), operands of = and <> ordered by their
// printed text.
Query canonicalize(const Query& query);

// True when text has the form [identifier].
bool is_placeholder_text(std::string_view text);

// Distinct tags / edge types in pattern order.
std::vector<std::string> pattern_tags(const Query& query);
std::vector<std::string> pattern_edge_types(const Query& query);

// Pre-order walk over every expression in the query.
template <typename Fn>
void visit_exprs(const Expr& e, Fn&& fn) {
    fn(e);
    for (const auto& a : e.args) visit_exprs(a, fn);
}

template <typename Fn>
void visit_exprs(const Query& q, Fn&& fn) {
    for (const auto& c : q.clauses) {
        if (auto* w = std::get_if<WhereClause>(&c)) visit_exprs(w->predicate, fn);
        else if (auto* wi = std::get_if<WithClause>(&c))
            for (const auto& it : wi->items) visit_exprs(it.expr, fn);
        else if (auto* r = std::get_if<ReturnClause>(&c))
            for (const auto& it : r->items) visit_exprs(it.expr, fn);
        else if (auto* o = std::get_if<OrderByClause>(&c)) visit_exprs(o->key, fn);
    }
}

} // namespace nl2gql::gql
