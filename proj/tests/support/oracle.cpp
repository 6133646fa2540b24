#include "oracle.hpp"

#include <cmath>

namespace nl2gql::testing {

namespace {

Value node_prop(const Node& n, const std::string& p) {
    if (p == "name") return Value(n.name);
    auto it = n.props.find(p);
    return it == n.props.end() ? Value() : it->second;
}

Value edge_prop(const Edge& e, const std::string& p) {
    auto it = e.props.find(p);
    return it == e.props.end() ? Value() : it->second;
}

bool is(const Node& n, const std::string& tag) { return n.tag == tag; }
bool is(const Node& n, const std::string& tag, const std::string& name) { return n.tag == tag && n.name == name; }

// -1, 0, 1; both numeric and non-null.
int num_cmp(const Value& a, const Value& b) {
    if (a.is_int() && b.is_int()) return (a.as_int() > b.as_int()) - (a.as_int() < b.as_int());
    const double x = a.is_int() ? static_cast<double>(a.as_int()) : a.as_float();
    const double y = b.is_int() ? static_cast<double>(b.as_int()) : b.as_float();
    return (x > y) - (x < y);
}

Value abs_diff(const Value& b, const Value& a) {
    if (a.is_null() || b.is_null()) return Value();
    if (a.is_int() && b.is_int()) {
        const std::int64_t d = b.as_int() - a.as_int();
        return Value(d < 0 ? -d : d);
    }
    const double x = a.is_int() ? static_cast<double>(a.as_int()) : a.as_float();
    const double y = b.is_int() ? static_cast<double>(b.as_int()) : b.as_float();
    return Value(std::fabs(y - x));
}

} // namespace

ResultTable oracle_execute(const PropertyGraph& graph, const ShapeCase& c) {
    const auto& nodes = graph.nodes();
    const auto& edges = graph.edges();
    ResultTable t;
    auto row = [&t](Value v) { t.rows.push_back({std::move(v)}); };

    switch (c.type) {
    case 1:
        for (const Node& n : nodes)
            if (is(n, c.t1, c.e1)) row(node_prop(n, c.p1));
        break;
    case 2: {
        // ORDER BY n2 DESC is stable; LIMIT 1 keeps the first row with the
        // greatest key, null ranking above every number.
        const Node* best = nullptr;
        Value best_key;
        bool best_null = false;
        for (const Node& n : nodes) {
            if (!is(n, c.t1)) continue;
            Value k = node_prop(n, c.p1);
            if (best_null) break;
            if (!best || k.is_null() || (!best_key.is_null() && num_cmp(k, best_key) > 0)) {
                best = &n;
                best_key = k;
                best_null = k.is_null();
            }
        }
        if (best) row(node_prop(*best, c.p2));
        t.ordered = true;
        break;
    }
    case 3:
        for (const Node& s1 : nodes) {
            if (!is(s1, c.t1)) continue;
            for (const Edge& a : edges) {
                if (a.edge_type != c.rel1 || a.dst != s1.id) continue;
                const Node& s2 = nodes[a.src];
                if (!is(s2, c.t2)) continue;
                for (const Edge& b : edges) {
                    if (b.edge_type != c.rel2 || b.dst != s2.id) continue;
                    if (is(nodes[b.src], c.t3, c.e1)) row(node_prop(s1, c.p1));
                }
            }
        }
        break;
    case 4:
        for (const Node& n : nodes) {
            if (!is(n, c.t1, c.e1)) continue;
            Value v = node_prop(n, c.p1);
            row(v.is_null() ? Value() : Value(num_cmp(v, c.m) > 0));
        }
        break;
    case 5:
        for (const Node& s1 : nodes) {
            if (!is(s1, c.t1, c.e1)) continue;
            for (const Edge& a : edges) {
                if (a.edge_type != c.rel1 || a.dst != s1.id) continue;
                const Node& s2 = nodes[a.src];
                if (!is(s2, c.t2)) continue;
                for (const Edge& b : edges) {
                    if (b.edge_type != c.rel1 || b.src != s2.id) continue;
                    if (is(nodes[b.dst], c.t1, c.e2)) row(node_prop(s2, c.p1));
                }
            }
        }
        break;
    case 6:
        for (const Node& s1 : nodes) {
            if (!is(s1, c.t1, c.e1)) continue;
            for (const Node& s2 : nodes) {
                if (is(s2, c.t1, c.e2)) row(abs_diff(node_prop(s2, c.p1), node_prop(s1, c.p1)));
            }
        }
        break;
    case 7:
        for (const Node& s1 : nodes) {
            if (!is(s1, c.t1, c.e1)) continue;
            for (const Edge& r : edges) {
                if (r.edge_type != c.rel1 || r.src != s1.id) continue;
                const Node& s2 = nodes[r.dst];
                if (!is(s2, c.t2)) continue;
                Value w = edge_prop(r, c.rp);
                if (!w.is_null() && num_cmp(w, c.m) < 0) row(node_prop(s2, c.p1));
            }
        }
        break;
    case 8:
        for (const Node& n : nodes) {
            if (!is(n, c.t1)) continue;
            Value v = node_prop(n, c.p1);
            if (v.is_string() && v.as_string().find(c.s) != std::string::npos) row(v);
        }
        break;
    default: break;
    }
    return t;
}

} // namespace nl2gql::testing
