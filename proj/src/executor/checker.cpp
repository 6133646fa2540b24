#include <map>

#include "nl2gql/error.hpp"
#include "nl2gql/executor.hpp"

namespace nl2gql {

namespace {

using namespace gql;

enum class Type { Unknown, String, Int, Float, Bool, Node, Edge };

std::string_view type_name(Type t) {
    switch (t) {
    case Type::Unknown: return "unknown";
    case Type::String: return "string";
    case Type::Int: return "int";
    case Type::Float: return "float";
    case Type::Bool: return "bool";
    case Type::Node: return "node";
    case Type::Edge: return "edge";
    }
    return "?";
}

Type from_kind(ValueKind k) {
    switch (k) {
    case ValueKind::String: return Type::String;
    case ValueKind::Int: return Type::Int;
    case ValueKind::Float: return Type::Float;
    case ValueKind::Bool: return Type::Bool;
    }
    return Type::Unknown;
}

bool numeric(Type t) { return t == Type::Int || t == Type::Float; }
bool scalar(Type t) { return t != Type::Node && t != Type::Edge; }

struct Binding {
    Type type;
    std::string label;  // tag or edge type
};

using Scope = std::map<std::string, Binding>;

class Checker {
public:
    explicit Checker(const GraphSchema& schema) : schema_(schema) {}

    void run(const Query& q) {
        for (const auto& c : q.clauses) {
            if (const auto* m = std::get_if<MatchClause>(&c)) {
                check_match(*m);
            } else if (const auto* w = std::get_if<WhereClause>(&c)) {
                expect_bool(type_of(w->predicate), "WHERE");
            } else if (const auto* wi = std::get_if<WithClause>(&c)) {
                project(wi->items, false);
            } else if (const auto* r = std::get_if<ReturnClause>(&c)) {
                project(r->items, true);
            } else if (const auto* ob = std::get_if<OrderByClause>(&c)) {
                Scope projected = scope_;
                for (auto& [k, v] : projected) pre_[k] = v;
                std::swap(scope_, pre_);
                const Type t = type_of(ob->key);
                std::swap(scope_, pre_);
                if (!scalar(t)) throw TypeMismatchError("ORDER BY key must be a scalar");
            }
        }
    }

private:
    const GraphSchema& schema_;
    Scope scope_;
    Scope pre_;

    void check_match(const MatchClause& m) {
        for (const auto& n : m.nodes) {
            if (!schema_.find_node(n.tag)) throw UnknownSchemaItemError("tag '" + n.tag + "'");
            if (!n.alias.empty()) scope_[n.alias] = {Type::Node, n.tag};
        }
        for (const auto& e : m.edges) {
            if (!schema_.find_edge(e.edge_type)) throw UnknownSchemaItemError("edge type '" + e.edge_type + "'");
            if (!e.alias.empty()) scope_[e.alias] = {Type::Edge, e.edge_type};
        }
    }

    void project(const std::vector<ProjectionItem>& items, bool is_return) {
        Scope next;
        for (const auto& item : items) {
            const Type t = type_of(item.expr);
            if (is_return && !scalar(t)) {
                throw TypeMismatchError("RETURN of a " + std::string(type_name(t)) +
                                        " binding; project a property instead");
            }
            std::string name = item.alias;
            if (name.empty() && item.expr.kind == ExprKind::Variable) name = item.expr.name;
            if (name.empty()) continue;
            Binding b{t, ""};
            if (item.expr.kind == ExprKind::Variable) b = scope_.at(item.expr.name);
            next[name] = b;
        }
        pre_ = std::move(scope_);
        scope_ = std::move(next);
    }

    static void expect_bool(Type t, std::string_view where) {
        if (t != Type::Bool && t != Type::Unknown) {
            throw TypeMismatchError(std::string(where) + " expects a boolean, got " + std::string(type_name(t)));
        }
    }

    Type type_of(const Expr& e) {
        switch (e.kind) {
        case ExprKind::Literal: return e.literal.is_null() ? Type::Unknown : from_kind(e.literal.kind());
        case ExprKind::Placeholder: return Type::Unknown;
        case ExprKind::Variable: {
            auto it = scope_.find(e.name);
            if (it == scope_.end()) throw Error("unbound alias '" + e.name + "'");
            return it->second.type;
        }
        case ExprKind::Property: return property_type(e);
        case ExprKind::Compare: {
            const Type a = type_of(e.args[0]);
            const Type b = type_of(e.args[1]);
            if (!scalar(a) || !scalar(b)) throw TypeMismatchError("cannot compare node or edge bindings");
            if (a != Type::Unknown && b != Type::Unknown) {
                const bool ok = (numeric(a) && numeric(b)) || (a == b && (a == Type::String || (a == Type::Bool &&
                                (e.op == CompareOp::Eq || e.op == CompareOp::Ne))));
                if (!ok) {
                    throw TypeMismatchError("cannot compare " + std::string(type_name(a)) + " " +
                                            std::string(to_string(e.op)) + " " + std::string(type_name(b)));
                }
            }
            return Type::Bool;
        }
        case ExprKind::Contains: {
            const Type a = type_of(e.args[0]);
            const Type b = type_of(e.args[1]);
            for (Type t : {a, b}) {
                if (t != Type::String && t != Type::Unknown) {
                    throw TypeMismatchError("CONTAINS expects strings, got " + std::string(type_name(t)));
                }
            }
            return Type::Bool;
        }
        case ExprKind::Subtract: {
            const Type a = type_of(e.args[0]);
            const Type b = type_of(e.args[1]);
            for (Type t : {a, b}) {
                if (!numeric(t) && t != Type::Unknown) {
                    throw TypeMismatchError("'-' expects numbers, got " + std::string(type_name(t)));
                }
            }
            if (a == Type::Int && b == Type::Int) return Type::Int;
            if (a == Type::Unknown || b == Type::Unknown) return Type::Unknown;
            return Type::Float;
        }
        case ExprKind::Abs: {
            const Type a = type_of(e.args[0]);
            if (!numeric(a) && a != Type::Unknown) {
                throw TypeMismatchError("ABS expects a number, got " + std::string(type_name(a)));
            }
            return a;
        }
        case ExprKind::And:
        case ExprKind::Or:
            expect_bool(type_of(e.args[0]), e.kind == ExprKind::And ? "AND" : "OR");
            expect_bool(type_of(e.args[1]), e.kind == ExprKind::And ? "AND" : "OR");
            return Type::Bool;
        case ExprKind::Not:
            expect_bool(type_of(e.args[0]), "NOT");
            return Type::Bool;
        }
        return Type::Unknown;
    }

    Type property_type(const Expr& e) {
        auto it = scope_.find(e.name);
        if (it == scope_.end()) throw Error("unbound alias '" + e.name + "'");
        if (!e.tag.empty()) {
            const NodeDef* def = schema_.find_node(e.tag);
            if (!def) throw UnknownSchemaItemError("tag '" + e.tag + "'");
            const PropertyDef* p = def->find_property(e.property);
            if (!p) throw UnknownSchemaItemError("property '" + e.tag + "." + e.property + "'");
            if (it->second.type != Type::Node) throw TypeMismatchError("'" + e.name + "' is not a node");
            return from_kind(p->kind);
        }
        if (it->second.type != Type::Edge) throw TypeMismatchError("'" + e.name + "' is not an edge");
        const EdgeDef* def = schema_.find_edge(it->second.label);
        if (!def) throw UnknownSchemaItemError("edge type '" + it->second.label + "'");
        const PropertyDef* p = def->find_property(e.property);
        if (!p) throw UnknownSchemaItemError("property '" + def->edge_type + "." + e.property + "'");
        return from_kind(p->kind);
    }
};

} // namespace

void check_query(const GraphSchema& schema, const gql::Query& query) { Checker(schema).run(query); }

} // namespace nl2gql
