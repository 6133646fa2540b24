#include <algorithm>
#include <cmath>
#include <limits>

#include "nl2gql/error.hpp"
#include "nl2gql/executor.hpp"

namespace nl2gql {

namespace {

using namespace gql;

struct NodeRef {
    NodeId id;
};
struct EdgeRef {
    EdgeId id;
};
using Binding = std::variant<Value, NodeRef, EdgeRef>;

struct Row {
    std::vector<std::pair<std::string, Binding>> vars;

    const Binding* find(std::string_view name) const {
        for (const auto& [k, v] : vars) {
            if (k == name) return &v;
        }
        return nullptr;
    }
};

// Binding lookup over a projected row with fallback to its source row
// (ORDER BY may reference either).
struct Env {
    const Row* primary;
    const Row* fallback = nullptr;

    const Binding& get(const std::string& name) const {
        if (const Binding* b = primary->find(name)) return *b;
        if (fallback) {
            if (const Binding* b = fallback->find(name)) return *b;
        }
        throw Error("unbound alias '" + name + "' at runtime");
    }
};

int sign_of(double d) { return (d > 0) - (d < 0); }

// Three-way comparison of two non-null scalars of comparable kinds.
int compare_scalars(const Value& a, const Value& b) {
    if (a.is_int() && b.is_int()) return (a.as_int() > b.as_int()) - (a.as_int() < b.as_int());
    if (a.is_numeric() && b.is_numeric()) return sign_of(a.as_number() - b.as_number());
    if (a.is_string() && b.is_string()) {
        const int c = a.as_string().compare(b.as_string());
        return (c > 0) - (c < 0);
    }
    if (a.is_bool() && b.is_bool()) return static_cast<int>(a.as_bool()) - static_cast<int>(b.as_bool());
    throw TypeMismatchError("cannot compare " + a.to_literal() + " with " + b.to_literal());
}

int sort_rank(const Value& v) {
    if (v.is_null()) return 3;
    if (v.is_bool()) return 0;
    if (v.is_numeric()) return 1;
    return 2;
}

// Total order used by ORDER BY: bool < numbers < strings < null.
bool sort_less(const Value& a, const Value& b) {
    const int ra = sort_rank(a);
    const int rb = sort_rank(b);
    if (ra != rb) return ra < rb;
    if (ra == 3) return false;
    return compare_scalars(a, b) < 0;
}

class Evaluator {
public:
    explicit Evaluator(const PropertyGraph& g) : g_(g) {}

    Value eval(const Expr& e, const Env& env) const {
        switch (e.kind) {
        case ExprKind::Literal: return e.literal;
        case ExprKind::Placeholder: throw Error("unfilled placeholder [" + e.name + "]");
        case ExprKind::Variable: {
            const Binding& b = env.get(e.name);
            if (const Value* v = std::get_if<Value>(&b)) return *v;
            throw TypeMismatchError("'" + e.name + "' is a graph element, not a value");
        }
        case ExprKind::Property: return property(e, env);
        case ExprKind::Compare: {
            Value a = eval(e.args[0], env);
            Value b = eval(e.args[1], env);
            if (a.is_null() || b.is_null()) return Value();
            if ((a.is_bool() || b.is_bool()) && e.op != CompareOp::Eq && e.op != CompareOp::Ne) {
                throw TypeMismatchError("booleans support only = and <>");
            }
            const int c = compare_scalars(a, b);
            switch (e.op) {
            case CompareOp::Eq: return Value(c == 0);
            case CompareOp::Ne: return Value(c != 0);
            case CompareOp::Lt: return Value(c < 0);
            case CompareOp::Le: return Value(c <= 0);
            case CompareOp::Gt: return Value(c > 0);
            case CompareOp::Ge: return Value(c >= 0);
            }
            return Value();
        }
        case ExprKind::Contains: {
            Value a = eval(e.args[0], env);
            Value b = eval(e.args[1], env);
            if (a.is_null() || b.is_null()) return Value();
            if (!a.is_string() || !b.is_string()) {
                throw TypeMismatchError("CONTAINS expects strings, got " + a.to_literal() + " and " + b.to_literal());
            }
            return Value(a.as_string().find(b.as_string()) != std::string::npos);
        }
        case ExprKind::Subtract: {
            Value a = eval(e.args[0], env);
            Value b = eval(e.args[1], env);
            if (a.is_null() || b.is_null()) return Value();
            if (!a.is_numeric() || !b.is_numeric()) throw TypeMismatchError("'-' expects numbers");
            if (a.is_int() && b.is_int()) {
                std::int64_t r = 0;
                if (!__builtin_sub_overflow(a.as_int(), b.as_int(), &r)) return Value(r);
            }
            return Value(a.as_number() - b.as_number());
        }
        case ExprKind::Abs: {
            Value a = eval(e.args[0], env);
            if (a.is_null()) return a;
            if (a.is_int()) {
                if (a.as_int() == std::numeric_limits<std::int64_t>::min()) return Value(-a.as_number());
                return Value(a.as_int() < 0 ? -a.as_int() : a.as_int());
            }
            if (a.is_float()) return Value(std::fabs(a.as_float()));
            throw TypeMismatchError("ABS expects a number");
        }
        case ExprKind::And:
        case ExprKind::Or: {
            const Value a = eval(e.args[0], env);
            const Value b = eval(e.args[1], env);
            for (const Value* v : {&a, &b}) {
                if (!v->is_null() && !v->is_bool()) throw TypeMismatchError("boolean operator on non-boolean");
            }
            const bool is_and = e.kind == ExprKind::And;
            const bool dominant = !is_and;  // false dominates AND, true dominates OR
            if ((!a.is_null() && a.as_bool() == dominant) || (!b.is_null() && b.as_bool() == dominant)) {
                return Value(dominant);
            }
            if (a.is_null() || b.is_null()) return Value();
            return Value(!dominant);
        }
        case ExprKind::Not: {
            const Value a = eval(e.args[0], env);
            if (a.is_null()) return a;
            if (!a.is_bool()) throw TypeMismatchError("NOT on non-boolean");
            return Value(!a.as_bool());
        }
        }
        return Value();
    }

private:
    const PropertyGraph& g_;

    Value property(const Expr& e, const Env& env) const {
        const Binding& b = env.get(e.name);
        if (!e.tag.empty()) {
            const NodeRef* n = std::get_if<NodeRef>(&b);
            if (!n) throw TypeMismatchError("'" + e.name + "' is not a node");
            const Node& node = g_.node(n->id);
            if (node.tag != e.tag) return Value();
            return node.property(e.property);
        }
        const EdgeRef* r = std::get_if<EdgeRef>(&b);
        if (!r) throw TypeMismatchError("'" + e.name + "' is not an edge");
        return g_.edge(r->id).property(e.property);
    }
};

// All bindings of a chain pattern as [n0, e0, n1, e1, ..., nk] id vectors,
// in lexicographic order.
class PatternMatcher {
public:
    PatternMatcher(const PropertyGraph& g, const MatchClause& m) : g_(g), m_(m) {}

    std::vector<std::vector<std::uint32_t>> run() {
        const std::size_t k = m_.edges.size();
        std::size_t anchor = 0;
        std::size_t best = SIZE_MAX;
        for (std::size_t i = 0; i <= k; ++i) {
            const std::size_t n = candidates(i).size();
            if (n < best) {
                best = n;
                anchor = i;
            }
        }
        anchor_ = anchor;
        slots_.assign(2 * k + 1, 0);
        for (NodeId id : candidates(anchor)) {
            slots_[2 * anchor] = id;
            extend_right(anchor);
        }
        std::sort(results_.begin(), results_.end());
        return std::move(results_);
    }

private:
    const PropertyGraph& g_;
    const MatchClause& m_;
    std::size_t anchor_ = 0;
    std::vector<std::uint32_t> slots_;
    std::vector<std::vector<std::uint32_t>> results_;
    std::vector<NodeId> scratch_;

    std::vector<NodeId> candidates(std::size_t i) {
        const NodePattern& np = m_.nodes[i];
        if (np.name) {
            if (auto id = g_.find_node(np.tag, *np.name)) return {*id};
            return {};
        }
        auto span = g_.nodes_by_tag(np.tag);
        return {span.begin(), span.end()};
    }

    bool node_ok(std::size_t i, NodeId id) const {
        const NodePattern& np = m_.nodes[i];
        const Node& n = g_.node(id);
        return n.tag == np.tag && (!np.name || n.name == *np.name);
    }

    void extend_right(std::size_t i) {
        if (i == m_.edges.size()) {
            extend_left(anchor_);
            return;
        }
        const EdgePattern& ep = m_.edges[i];
        const NodeId from = slots_[2 * i];
        const bool out = ep.direction == Direction::Outgoing;
        for (EdgeId eid : out ? g_.out_edges(from) : g_.in_edges(from)) {
            const Edge& e = g_.edge(eid);
            if (e.edge_type != ep.edge_type) continue;
            const NodeId to = out ? e.dst : e.src;
            if (!node_ok(i + 1, to)) continue;
            slots_[2 * i + 1] = eid;
            slots_[2 * i + 2] = to;
            extend_right(i + 1);
        }
    }

    void extend_left(std::size_t i) {
        if (i == 0) {
            results_.push_back(slots_);
            return;
        }
        const EdgePattern& ep = m_.edges[i - 1];
        const NodeId from = slots_[2 * i];
        const bool out = ep.direction == Direction::Outgoing;  // nodes[i-1] -> nodes[i]
        for (EdgeId eid : out ? g_.in_edges(from) : g_.out_edges(from)) {
            const Edge& e = g_.edge(eid);
            if (e.edge_type != ep.edge_type) continue;
            const NodeId to = out ? e.src : e.dst;
            if (!node_ok(i - 1, to)) continue;
            slots_[2 * i - 1] = eid;
            slots_[2 * i - 2] = to;
            extend_left(i - 1);
        }
    }
};

std::string column_name(const ProjectionItem& item) {
    return item.alias.empty() ? print(item.expr) : item.alias;
}

class Executor {
public:
    Executor(const PropertyGraph& g, const Query& q) : g_(g), q_(q), eval_(g) {}

    ResultTable run() {
        rows_.push_back(Row{});
        const std::vector<ProjectionItem>* last_items = nullptr;
        for (const auto& c : q_.clauses) {
            if (const auto* m = std::get_if<MatchClause>(&c)) {
                match(*m);
            } else if (const auto* w = std::get_if<WhereClause>(&c)) {
                where(*w);
            } else if (const auto* wi = std::get_if<WithClause>(&c)) {
                project(wi->items);
                last_items = &wi->items;
            } else if (const auto* r = std::get_if<ReturnClause>(&c)) {
                project(r->items);
                last_items = &r->items;
            } else if (const auto* ob = std::get_if<OrderByClause>(&c)) {
                order_by(*ob);
            } else if (const auto* l = std::get_if<LimitClause>(&c)) {
                const auto n = static_cast<std::size_t>(std::max<std::int64_t>(0, l->count));
                if (rows_.size() > n) {
                    rows_.resize(n);
                    pre_rows_.resize(std::min(pre_rows_.size(), n));
                }
            }
        }
        ResultTable table;
        table.ordered = q_.has_order_by();
        if (!last_items) return table;
        for (const auto& item : *last_items) table.columns.push_back(column_name(item));
        for (const auto& row : rows_) {
            std::vector<Value> out;
            for (const auto& [name, b] : row.vars) {
                const Value* v = std::get_if<Value>(&b);
                if (!v) throw TypeMismatchError("cannot output graph element '" + name + "'");
                out.push_back(*v);
            }
            table.rows.push_back(std::move(out));
        }
        return table;
    }

private:
    const PropertyGraph& g_;
    const Query& q_;
    Evaluator eval_;
    std::vector<Row> rows_;
    std::vector<Row> pre_rows_;  // source rows of the last projection, index-aligned

    void match(const MatchClause& m) {
        const auto bindings = PatternMatcher(g_, m).run();
        std::vector<Row> next;
        next.reserve(rows_.size() * bindings.size());
        for (const auto& row : rows_) {
            for (const auto& ids : bindings) {
                Row r = row;
                for (std::size_t i = 0; i < m.nodes.size(); ++i) {
                    if (!m.nodes[i].alias.empty()) r.vars.emplace_back(m.nodes[i].alias, NodeRef{ids[2 * i]});
                    if (i < m.edges.size() && !m.edges[i].alias.empty()) {
                        r.vars.emplace_back(m.edges[i].alias, EdgeRef{ids[2 * i + 1]});
                    }
                }
                next.push_back(std::move(r));
            }
        }
        rows_ = std::move(next);
        pre_rows_.clear();
    }

    void where(const WhereClause& w) {
        std::vector<Row> kept;
        for (auto& row : rows_) {
            const Value v = eval_.eval(w.predicate, Env{&row});
            if (!v.is_null() && !v.is_bool()) throw TypeMismatchError("WHERE predicate is not boolean");
            if (!v.is_null() && v.as_bool()) kept.push_back(std::move(row));
        }
        rows_ = std::move(kept);
        pre_rows_.clear();
    }

    void project(const std::vector<ProjectionItem>& items) {
        std::vector<Row> next;
        next.reserve(rows_.size());
        for (const auto& row : rows_) {
            Row out;
            for (const auto& item : items) {
                if (item.expr.kind == ExprKind::Variable) {
                    Binding b = Env{&row}.get(item.expr.name);
                    out.vars.emplace_back(item.alias.empty() ? item.expr.name : item.alias, std::move(b));
                } else {
                    out.vars.emplace_back(column_name(item), eval_.eval(item.expr, Env{&row}));
                }
            }
            next.push_back(std::move(out));
        }
        pre_rows_ = std::move(rows_);
        rows_ = std::move(next);
    }

    void order_by(const OrderByClause& ob) {
        std::vector<Value> keys;
        keys.reserve(rows_.size());
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            keys.push_back(eval_.eval(ob.key, Env{&rows_[i], i < pre_rows_.size() ? &pre_rows_[i] : nullptr}));
        }
        std::vector<std::size_t> perm(rows_.size());
        for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
        std::stable_sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
            return ob.descending ? sort_less(keys[b], keys[a]) : sort_less(keys[a], keys[b]);
        });
        std::vector<Row> sorted;
        std::vector<Row> sorted_pre;
        for (std::size_t i : perm) {
            sorted.push_back(std::move(rows_[i]));
            if (i < pre_rows_.size()) sorted_pre.push_back(std::move(pre_rows_[i]));
        }
        rows_ = std::move(sorted);
        pre_rows_ = std::move(sorted_pre);
    }
};

} // namespace

ResultTable execute(const PropertyGraph& graph, const Query& query) {
    check_query(graph.schema(), query);
    return Executor(graph, query).run();
}

Verified execute_verified(const PropertyGraph& graph, std::string_view text) {
    Query q;
    try {
        q = parse(text);
    } catch (const ParseError& ex) {
        return Rejection{"parse", ex.what()};
    }
    try {
        return execute(graph, q);
    } catch (const UnknownSchemaItemError& ex) {
        return Rejection{"schema", ex.what()};
    } catch (const TypeMismatchError& ex) {
        return Rejection{"type", ex.what()};
    } catch (const Error& ex) {
        return Rejection{"execute", ex.what()};
    }
}

} // namespace nl2gql
