#include <cctype>
#include <set>

#include "nl2gql/gql.hpp"

namespace nl2gql::gql {

std::string_view to_string(CompareOp op) {
    switch (op) {
    case CompareOp::Eq: return "=";
    case CompareOp::Ne: return "<>";
    case CompareOp::Lt: return "<";
    case CompareOp::Le: return "<=";
    case CompareOp::Gt: return ">";
    case CompareOp::Ge: return ">=";
    }
    return "?";
}

Expr Expr::make_literal(Value v) {
    Expr e;
    e.kind = ExprKind::Literal;
    e.literal = std::move(v);
    return e;
}

Expr Expr::make_placeholder(std::string name) {
    Expr e;
    e.kind = ExprKind::Placeholder;
    e.name = std::move(name);
    return e;
}

Expr Expr::make_property(std::string alias, std::string tag, std::string property) {
    Expr e;
    e.kind = ExprKind::Property;
    e.name = std::move(alias);
    e.tag = std::move(tag);
    e.property = std::move(property);
    return e;
}

Expr Expr::make_variable(std::string name) {
    Expr e;
    e.kind = ExprKind::Variable;
    e.name = std::move(name);
    return e;
}

Expr Expr::make_compare(CompareOp op, Expr lhs, Expr rhs) {
    Expr e;
    e.kind = ExprKind::Compare;
    e.op = op;
    e.args.push_back(std::move(lhs));
    e.args.push_back(std::move(rhs));
    return e;
}

Expr Expr::make_binary(ExprKind kind, Expr lhs, Expr rhs) {
    Expr e;
    e.kind = kind;
    e.args.push_back(std::move(lhs));
    e.args.push_back(std::move(rhs));
    return e;
}

Expr Expr::make_not(Expr operand) {
    Expr e;
    e.kind = ExprKind::Not;
    e.args.push_back(std::move(operand));
    return e;
}

Expr Expr::make_abs(Expr operand) {
    Expr e;
    e.kind = ExprKind::Abs;
    e.args.push_back(std::move(operand));
    return e;
}

bool Query::has_order_by() const {
    for (const auto& c : clauses) {
        if (std::holds_alternative<OrderByClause>(c)) return true;
    }
    return false;
}

namespace {

int precedence(const Expr& e) {
    switch (e.kind) {
    case ExprKind::Or: return 1;
    case ExprKind::And: return 2;
    case ExprKind::Not: return 3;
    case ExprKind::Compare:
    case ExprKind::Contains: return 4;
    case ExprKind::Subtract: return 5;
    default: return 7;
    }
}

void print_expr(const Expr& e, int min_prec, std::string& out) {
    const int prec = precedence(e);
    const bool parens = prec < min_prec;
    if (parens) out += '(';
    switch (e.kind) {
    case ExprKind::Literal: out += e.literal.to_literal(); break;
    case ExprKind::Placeholder: out += "[" + e.name + "]"; break;
    case ExprKind::Variable: out += e.name; break;
    case ExprKind::Property:
        out += e.name;
        if (!e.tag.empty()) out += "." + e.tag;
        out += "." + e.property;
        break;
    case ExprKind::Or:
    case ExprKind::And:
        print_expr(e.args[0], prec, out);
        out += e.kind == ExprKind::Or ? " OR " : " AND ";
        print_expr(e.args[1], prec + 1, out);
        break;
    case ExprKind::Not:
        out += "NOT ";
        print_expr(e.args[0], prec, out);
        break;
    case ExprKind::Compare:
    case ExprKind::Contains:
        print_expr(e.args[0], 5, out);
        out += ' ';
        out += e.kind == ExprKind::Contains ? std::string_view("CONTAINS") : to_string(e.op);
        out += ' ';
        print_expr(e.args[1], 5, out);
        break;
    case ExprKind::Subtract:
        print_expr(e.args[0], 5, out);
        out += " - ";
        print_expr(e.args[1], 6, out);
        break;
    case ExprKind::Abs:
        out += "ABS(";
        print_expr(e.args[0], 0, out);
        out += ')';
        break;
    }
    if (parens) out += ')';
}

std::string print_items(const std::vector<ProjectionItem>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ", ";
        print_expr(items[i].expr, 0, out);
        if (!items[i].alias.empty()) out += " AS " + items[i].alias;
    }
    return out;
}

std::string print_node(const NodePattern& n) {
    std::string out = "(" + n.alias + ":" + n.tag;
    if (n.name) out += "{name:" + Value(*n.name).to_literal() + "}";
    return out + ")";
}

} // namespace

std::string print(const Expr& expr) {
    std::string out;
    print_expr(expr, 0, out);
    return out;
}

std::string print_pattern(const MatchClause& m) {
    std::string out = print_node(m.nodes.at(0));
    for (std::size_t i = 0; i < m.edges.size(); ++i) {
        const auto& e = m.edges[i];
        const std::string body = "[" + e.alias + ":" + e.edge_type + "]";
        out += e.direction == Direction::Outgoing ? "-" + body + "->" : "<-" + body + "-";
        out += print_node(m.nodes.at(i + 1));
    }
    return out;
}

std::vector<ClauseText> split_clauses(const Query& q) {
    std::vector<ClauseText> out;
    for (const auto& c : q.clauses) {
        std::visit(
            [&](const auto& clause) {
                using T = std::decay_t<decltype(clause)>;
                if constexpr (std::is_same_v<T, MatchClause>) {
                    out.push_back({"MATCH", print_pattern(clause)});
                } else if constexpr (std::is_same_v<T, WhereClause>) {
                    out.push_back({"WHERE", print(clause.predicate)});
                } else if constexpr (std::is_same_v<T, WithClause>) {
                    out.push_back({"WITH", print_items(clause.items)});
                } else if constexpr (std::is_same_v<T, ReturnClause>) {
                    out.push_back({"RETURN", print_items(clause.items)});
                } else if constexpr (std::is_same_v<T, OrderByClause>) {
                    out.push_back({"ORDER BY", print(clause.key) + (clause.descending ? " DESC" : "")});
                } else {
                    out.push_back({"LIMIT", std::to_string(clause.count)});
                }
            },
            c);
    }
    return out;
}

std::string print(const Query& q) {
    std::string out;
    for (const auto& c : split_clauses(q)) {
        if (!out.empty()) out += ' ';
        out += c.text();
    }
    return out;
}

bool is_placeholder_text(std::string_view text) {
    if (text.size() < 3 || text.front() != '[' || text.back() != ']') return false;
    for (char c : text.substr(1, text.size() - 2)) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
    }
    return true;
}

std::vector<std::string> pattern_tags(const Query& q) {
    std::vector<std::string> out;
    std::set<std::string> seen;
    for (const auto& c : q.clauses) {
        if (const auto* m = std::get_if<MatchClause>(&c)) {
            for (const auto& n : m->nodes) {
                if (seen.insert(n.tag).second) out.push_back(n.tag);
            }
        }
    }
    return out;
}

std::vector<std::string> pattern_edge_types(const Query& q) {
    std::vector<std::string> out;
    std::set<std::string> seen;
    for (const auto& c : q.clauses) {
        if (const auto* m = std::get_if<MatchClause>(&c)) {
            for (const auto& e : m->edges) {
                if (seen.insert(e.edge_type).second) out.push_back(e.edge_type);
            }
        }
    }
    return out;
}

} // namespace nl2gql::gql
