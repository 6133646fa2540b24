#include "generators.hpp"

#include <algorithm>
#include <limits>

#include "nl2gql/error.hpp"

namespace nl2gql::testing {

using gql::CompareOp;
using gql::Expr;
using gql::ExprKind;

std::string data_dir() { return NL2GQL_DATA_DIR; }
std::string fixture_dir() { return data_dir() + "/fingql_mini"; }

GraphSchema fixture_schema() { return load_schema(fixture_dir() + "/schema.json"); }

PropertyGraph fixture_graph() {
    return load_graph(fixture_schema(), fixture_dir() + "/nodes.jsonl", fixture_dir() + "/edges.jsonl");
}

GraphSchema random_schema_graph(Rng& rng, std::size_t max_tags) {
    const std::size_t n = 1 + rng.index(max_tags);
    std::vector<NodeDef> nodes;
    for (std::size_t i = 0; i < n; ++i) nodes.push_back({"t" + std::to_string(i), {}});
    std::vector<EdgeDef> edges;
    const std::size_t m = rng.index(2 * n + 1);
    for (std::size_t i = 0; i < m; ++i) {
        edges.push_back({"e" + std::to_string(i), nodes[rng.index(n)].tag, nodes[rng.index(n)].tag, {}});
    }
    return GraphSchema(std::move(nodes), std::move(edges));
}

GraphSchema random_shape_schema(Rng& rng) {
    const std::size_t n = 2 + rng.index(3);
    std::vector<NodeDef> nodes;
    for (std::size_t i = 0; i < n; ++i) {
        NodeDef d{"tag" + std::to_string(i), {{"i1", ValueKind::Int, ""}, {"f1", ValueKind::Float, ""},
                                              {"s1", ValueKind::String, ""}}};
        if (rng.chance(0.5)) d.properties.push_back({"i2", ValueKind::Int, ""});
        if (rng.chance(0.5)) d.properties.push_back({"s2", ValueKind::String, ""});
        nodes.push_back(std::move(d));
    }
    std::vector<EdgeDef> edges;
    const std::size_t m = 2 + rng.index(4);
    for (std::size_t i = 0; i < m; ++i) {
        EdgeDef e{"rel" + std::to_string(i), nodes[rng.index(n)].tag, nodes[rng.index(n)].tag, {}};
        if (i == 0 || rng.chance(0.5)) e.properties.push_back({"w", ValueKind::Int, ""});
        if (rng.chance(0.4)) e.properties.push_back({"x", ValueKind::Float, ""});
        edges.push_back(std::move(e));
    }
    return GraphSchema(std::move(nodes), std::move(edges));
}

namespace {

const std::vector<std::string>& name_pool() {
    static const std::vector<std::string> pool = {"alpha", "beta", "gamma", "delta", "中国平安", "招商银行",
                                                  "O'Neil", "back\\slash", "Sam", "李明", "x", "long name"};
    return pool;
}

Value random_int(Rng& rng) { return Value(static_cast<std::int64_t>(rng.index(16)) - 3); }
Value random_float(Rng& rng) { return Value(static_cast<double>(static_cast<int>(rng.index(32)) - 4) * 0.5); }

std::string random_text(Rng& rng) {
    static const std::vector<std::string> parts = {"a", "b", "ab", "中", "国", "'", "c d", "银行"};
    std::string s;
    const std::size_t k = 1 + rng.index(4);
    for (std::size_t i = 0; i < k; ++i) s += parts[rng.index(parts.size())];
    return s;
}

Value random_value(Rng& rng, ValueKind kind) {
    switch (kind) {
    case ValueKind::Int: return random_int(rng);
    case ValueKind::Float: return random_float(rng);
    case ValueKind::Bool: return Value(rng.chance(0.5));
    case ValueKind::String: break;
    }
    return Value(random_text(rng));
}

PropertyMap random_props(Rng& rng, const std::vector<PropertyDef>& defs) {
    PropertyMap props;
    for (const auto& d : defs) {
        if (d.name == kNameProperty || rng.chance(0.2)) continue;
        props.emplace(d.name, random_value(rng, d.kind));
    }
    return props;
}

} // namespace

PropertyGraph random_graph(Rng& rng, const GraphSchema& schema, std::size_t max_nodes) {
    PropertyGraph g(schema);
    const auto& defs = schema.node_defs();
    const std::size_t n = std::min<std::size_t>(max_nodes, 3 + rng.index(max_nodes));
    std::map<std::string, std::vector<std::string>> free_names;
    for (const auto& d : defs) {
        free_names[d.tag] = name_pool();
        rng.shuffle(free_names[d.tag]);
    }
    std::size_t fresh = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const NodeDef& d = defs[rng.index(defs.size())];
        auto& names = free_names[d.tag];
        std::string name;
        if (!names.empty()) {
            name = names.back();
            names.pop_back();
        } else {
            name = "node" + std::to_string(fresh++);
        }
        g.add_node(d.tag, name, random_props(rng, d.properties));
    }
    const auto& edefs = schema.edge_defs();
    if (edefs.empty()) return g;
    const std::size_t m = rng.index(2 * n + 1);
    for (std::size_t i = 0; i < m; ++i) {
        const EdgeDef& e = edefs[rng.index(edefs.size())];
        auto from = g.nodes_by_tag(e.start_tag);
        auto to = g.nodes_by_tag(e.end_tag);
        if (from.empty() || to.empty()) continue;
        const Node& a = g.node(from[rng.index(from.size())]);
        const Node& b = g.node(to[rng.index(to.size())]);
        g.add_edge(e.edge_type, a.tag, a.name, b.tag, b.name, random_props(rng, e.properties));
    }
    return g;
}

namespace {

std::string pick_property(Rng& rng, const std::vector<PropertyDef>& defs, PropertyConstraint c) {
    std::vector<std::string> ok;
    for (const auto& d : defs) {
        switch (c) {
        case PropertyConstraint::Any: ok.push_back(d.name); break;
        case PropertyConstraint::AnyButName:
            if (d.name != kNameProperty) ok.push_back(d.name);
            break;
        case PropertyConstraint::Numeric:
            if (is_numeric(d.kind)) ok.push_back(d.name);
            break;
        case PropertyConstraint::String:
            if (d.kind == ValueKind::String) ok.push_back(d.name);
            break;
        }
    }
    if (ok.empty()) return {};
    return ok[rng.index(ok.size())];
}

std::string pick_name(Rng& rng, const PropertyGraph& g, const std::string& tag) {
    auto ids = g.nodes_by_tag(tag);
    if (!ids.empty() && rng.chance(0.85)) return g.node(ids[rng.index(ids.size())]).name;
    return name_pool()[rng.index(name_pool().size())];
}

// Name of a node at one end of an edge of the given type, so multi-hop
// patterns are often non-empty; falls back to pick_name.
std::string pick_endpoint_name(Rng& rng, const PropertyGraph& g, const std::string& edge_type, bool start,
                               const std::string& tag) {
    std::vector<std::string> names;
    for (const auto& e : g.edges()) {
        if (e.edge_type == edge_type) names.push_back(g.node(start ? e.src : e.dst).name);
    }
    if (names.empty() || rng.chance(0.15)) return pick_name(rng, g, tag);
    return names[rng.index(names.size())];
}

Value pick_number(Rng& rng) { return rng.chance(0.5) ? random_int(rng) : random_float(rng); }

std::string lit(const std::string& s) { return Value(s).to_literal(); }

} // namespace

std::optional<ShapeCase> random_shape_case(Rng& rng, const PropertyGraph& g, int type) {
    const GraphSchema& schema = g.schema();
    const auto& ndefs = schema.node_defs();
    const auto& edefs = schema.edge_defs();
    ShapeCase c;
    c.type = type;
    const NodeDef& nd = ndefs[rng.index(ndefs.size())];
    c.t1 = nd.tag;
    switch (type) {
    case 1:
        c.e1 = pick_name(rng, g, c.t1);
        c.p1 = pick_property(rng, nd.properties, PropertyConstraint::AnyButName);
        c.gql = "MATCH (s:" + c.t1 + "{name:" + lit(c.e1) + "}) RETURN s." + c.t1 + "." + c.p1;
        break;
    case 2:
        c.p2 = pick_property(rng, nd.properties, PropertyConstraint::Any);
        c.p1 = pick_property(rng, nd.properties, PropertyConstraint::Numeric);
        c.gql = "MATCH (s:" + c.t1 + ") WITH s." + c.t1 + "." + c.p2 + " AS n1, s." + c.t1 + "." + c.p1 +
                " AS n2 ORDER BY n2 DESC LIMIT 1 RETURN n1";
        break;
    case 3: {
        std::vector<std::pair<const EdgeDef*, const EdgeDef*>> chains;
        for (const auto& a : edefs)
            for (const auto& b : edefs)
                if (b.end_tag == a.start_tag) chains.emplace_back(&a, &b);
        if (chains.empty()) return std::nullopt;
        auto [a, b] = chains[rng.index(chains.size())];
        c.rel1 = a->edge_type;
        c.rel2 = b->edge_type;
        c.t1 = a->end_tag;
        c.t2 = a->start_tag;
        c.t3 = b->start_tag;
        c.e1 = pick_endpoint_name(rng, g, c.rel2, true, c.t3);
        c.p1 = pick_property(rng, schema.find_node(c.t1)->properties, PropertyConstraint::Any);
        c.gql = "MATCH (s1:" + c.t1 + ")<-[:" + c.rel1 + "]-(s2:" + c.t2 + ")<-[:" + c.rel2 + "]-(s3:" + c.t3 +
                "{name:" + lit(c.e1) + "}) RETURN s1." + c.t1 + "." + c.p1;
        break;
    }
    case 4:
        c.e1 = pick_name(rng, g, c.t1);
        c.p1 = pick_property(rng, nd.properties, PropertyConstraint::Numeric);
        c.m = pick_number(rng);
        c.gql = "MATCH (s:" + c.t1 + "{name:" + lit(c.e1) + "}) RETURN s." + c.t1 + "." + c.p1 + " > " +
                c.m.to_literal();
        break;
    case 5: {
        if (edefs.empty()) return std::nullopt;
        const EdgeDef& e = edefs[rng.index(edefs.size())];
        c.rel1 = e.edge_type;
        c.t1 = e.end_tag;
        c.t2 = e.start_tag;
        c.e1 = pick_endpoint_name(rng, g, c.rel1, false, c.t1);
        c.e2 = rng.chance(0.2) ? c.e1 : pick_endpoint_name(rng, g, c.rel1, false, c.t1);
        c.p1 = pick_property(rng, schema.find_node(c.t2)->properties, PropertyConstraint::Any);
        c.gql = "MATCH (s1:" + c.t1 + "{name:" + lit(c.e1) + "})<-[:" + c.rel1 + "]-(s2:" + c.t2 + ")-[:" + c.rel1 +
                "]->(s3:" + c.t1 + "{name:" + lit(c.e2) + "}) RETURN s2." + c.t2 + "." + c.p1;
        break;
    }
    case 6:
        c.e1 = pick_name(rng, g, c.t1);
        c.e2 = pick_name(rng, g, c.t1);
        c.p1 = pick_property(rng, nd.properties, PropertyConstraint::Numeric);
        c.gql = "MATCH (s1:" + c.t1 + "{name:" + lit(c.e1) + "}) WITH s1." + c.t1 + "." + c.p1 +
                " AS t1 MATCH (s2:" + c.t1 + "{name:" + lit(c.e2) + "}) WITH ABS(s2." + c.t1 + "." + c.p1 +
                " - t1) AS abs_diff RETURN abs_diff";
        break;
    case 7: {
        std::vector<const EdgeDef*> ok;
        for (const auto& e : edefs)
            if (!pick_property(rng, e.properties, PropertyConstraint::Numeric).empty()) ok.push_back(&e);
        if (ok.empty()) return std::nullopt;
        const EdgeDef& e = *ok[rng.index(ok.size())];
        c.rel1 = e.edge_type;
        c.t1 = e.start_tag;
        c.t2 = e.end_tag;
        c.e1 = pick_endpoint_name(rng, g, c.rel1, true, c.t1);
        c.rp = pick_property(rng, e.properties, PropertyConstraint::Numeric);
        c.m = pick_number(rng);
        c.p1 = pick_property(rng, schema.find_node(c.t2)->properties, PropertyConstraint::Any);
        c.gql = "MATCH (s1:" + c.t1 + "{name:" + lit(c.e1) + "})-[r:" + c.rel1 + "]->(s2:" + c.t2 + ") WHERE r." +
                c.rp + " < " + c.m.to_literal() + " RETURN s2." + c.t2 + "." + c.p1;
        break;
    }
    case 8: {
        c.p1 = pick_property(rng, nd.properties, PropertyConstraint::String);
        auto ids = g.nodes_by_tag(c.t1);
        c.s = random_text(rng).substr(0, 1);
        if (!ids.empty() && rng.chance(0.6)) {
            Value v = g.node(ids[rng.index(ids.size())]).property(c.p1);
            if (v.is_string() && !v.as_string().empty()) c.s = v.as_string().substr(0, 1 + rng.index(2));
        }
        // Keep the needle valid UTF-8 by never cutting inside a code point.
        while (!c.s.empty() && (static_cast<unsigned char>(c.s.back()) & 0xC0) == 0x80) c.s.pop_back();
        while (!c.s.empty() && (static_cast<unsigned char>(c.s.back()) & 0xC0) == 0xC0) c.s.pop_back();
        c.gql = "MATCH (s:" + c.t1 + ") WHERE s." + c.t1 + "." + c.p1 + " CONTAINS " + lit(c.s) + " RETURN s." +
                c.t1 + "." + c.p1;
        break;
    }
    default: return std::nullopt;
    }
    return c;
}

namespace {

struct Bound {
    std::string name;
    enum Kind { NodeVar, EdgeVar, ValueVar } kind;
    std::string tag;
};

class QueryFuzzer {
public:
    explicit QueryFuzzer(Rng& rng) : rng_(rng) {}

    gql::Query build() {
        gql::Query q;
        const std::size_t segments = 1 + rng_.index(3);
        for (std::size_t seg = 0; seg < segments; ++seg) {
            const std::size_t matches = 1 + rng_.index(2);
            for (std::size_t i = 0; i < matches; ++i) q.clauses.emplace_back(match());
            if (rng_.chance(0.5)) q.clauses.emplace_back(gql::WhereClause{boolean(2)});
            const bool last = seg + 1 == segments;
            std::vector<Bound> before = scope_;
            auto items = projection(!last);
            if (last) q.clauses.emplace_back(gql::ReturnClause{std::move(items)});
            else q.clauses.emplace_back(gql::WithClause{std::move(items)});
            if (last && rng_.chance(0.4)) {
                std::vector<Bound> projected = scope_;
                scope_.insert(scope_.end(), before.begin(), before.end());
                q.clauses.emplace_back(gql::OrderByClause{term(2), rng_.chance(0.5)});
                scope_ = projected;
            }
            if (last && rng_.chance(0.4)) q.clauses.emplace_back(gql::LimitClause{static_cast<std::int64_t>(rng_.index(20))});
        }
        return q;
    }

private:
    Rng& rng_;
    std::vector<Bound> scope_;
    std::size_t counter_ = 0;

    std::string ident(const char* prefix) { return prefix + std::to_string(counter_++); }

    std::string pick(std::initializer_list<const char*> xs) {
        std::vector<const char*> v(xs);
        return v[rng_.index(v.size())];
    }

    gql::MatchClause match() {
        gql::MatchClause m;
        const std::size_t n = 1 + rng_.index(3);
        for (std::size_t i = 0; i < n; ++i) {
            gql::NodePattern p;
            p.tag = pick({"stock", "fund", "company", "tag_a", "Person"});
            if (rng_.chance(0.7)) {
                p.alias = ident("n");
                scope_.push_back({p.alias, Bound::NodeVar, p.tag});
            }
            if (rng_.chance(0.4)) p.name = string_literal();
            if (i > 0) {
                gql::EdgePattern e;
                e.edge_type = pick({"holds", "belong_to", "rel_x"});
                e.direction = rng_.chance(0.5) ? gql::Direction::Outgoing : gql::Direction::Incoming;
                if (rng_.chance(0.5)) {
                    e.alias = ident("r");
                    scope_.push_back({e.alias, Bound::EdgeVar, e.edge_type});
                }
                m.edges.push_back(std::move(e));
            }
            m.nodes.push_back(std::move(p));
        }
        return m;
    }

    std::string string_literal() {
        static const std::vector<std::string> parts = {"a", "中文", "'", "\\", " ", "O'Neil", "\\'", "x\"y", "%"};
        std::string s;
        const std::size_t k = rng_.index(4);
        for (std::size_t i = 0; i < k; ++i) s += parts[rng_.index(parts.size())];
        return s;
    }

    Value literal() {
        switch (rng_.index(7)) {
        case 0: return Value(static_cast<std::int64_t>(rng_.index(2000)) - 1000);
        case 1: return Value(rng_.chance(0.5) ? std::numeric_limits<std::int64_t>::min()
                                              : std::numeric_limits<std::int64_t>::max());
        case 2: return Value(static_cast<double>(static_cast<int>(rng_.index(400)) - 200) / 8.0);
        case 3: {
            static const double specials[] = {3.0, -0.0, 1e-7, 1.5e300, 0.1, -2.5e-12, 123456789.125};
            return Value(specials[rng_.index(std::size(specials))]);
        }
        case 4: return Value(rng_.chance(0.5));
        default: return Value(string_literal());
        }
    }

    Expr term(int depth) {
        const std::size_t r = rng_.index(depth > 0 ? 6 : 3);
        if (r == 0 || scope_.empty()) return Expr::make_literal(literal());
        if (r == 1 || r == 2) {
            const Bound& b = scope_[rng_.index(scope_.size())];
            std::string prop = pick({"name", "code", "price", "share_ratio", "v1"});
            switch (b.kind) {
            case Bound::NodeVar: return Expr::make_property(b.name, b.tag, prop);
            case Bound::EdgeVar: return Expr::make_property(b.name, "", prop);
            case Bound::ValueVar: return Expr::make_variable(b.name);
            }
        }
        if (r == 3) return Expr::make_binary(ExprKind::Subtract, term(depth - 1), term(depth - 1));
        if (r == 4) return Expr::make_abs(term(depth - 1));
        return boolean(depth - 1);
    }

    Expr boolean(int depth) {
        const std::size_t r = rng_.index(depth > 0 ? 7 : 3);
        static const CompareOp ops[] = {CompareOp::Eq, CompareOp::Ne, CompareOp::Lt,
                                        CompareOp::Le, CompareOp::Gt, CompareOp::Ge};
        switch (r) {
        case 0: return Expr::make_compare(ops[rng_.index(6)], term(depth), term(depth));
        case 1: return Expr::make_binary(ExprKind::Contains, term(depth), term(depth));
        case 2: return Expr::make_literal(Value(rng_.chance(0.5)));
        case 3: return Expr::make_binary(ExprKind::And, boolean(depth - 1), boolean(depth - 1));
        case 4: return Expr::make_binary(ExprKind::Or, boolean(depth - 1), boolean(depth - 1));
        case 5: return Expr::make_not(boolean(depth - 1));
        default: return term(depth - 1);
        }
    }

    std::vector<gql::ProjectionItem> projection(bool is_with) {
        std::vector<gql::ProjectionItem> items;
        std::vector<Bound> next;
        const std::size_t n = 1 + rng_.index(3);
        for (std::size_t i = 0; i < n; ++i) {
            gql::ProjectionItem it;
            if (!scope_.empty() && rng_.chance(0.25)) {
                const Bound& b = scope_[rng_.index(scope_.size())];
                const bool taken = std::any_of(next.begin(), next.end(), [&](const Bound& x) { return x.name == b.name; });
                if (!taken) {
                    it.expr = Expr::make_variable(b.name);
                    if (rng_.chance(0.5)) it.alias = b.name;
                    next.push_back(b);
                    items.push_back(std::move(it));
                    continue;
                }
            }
            it.expr = rng_.chance(0.7) ? term(2) : boolean(2);
            // A bare variable names its column, so it must be aliased to stay unique.
            const bool bare_variable = it.expr.kind == ExprKind::Variable;
            if (is_with || bare_variable || rng_.chance(0.5)) {
                it.alias = ident("v");
                next.push_back({it.alias, Bound::ValueVar, ""});
            }
            items.push_back(std::move(it));
        }
        scope_ = std::move(next);
        return items;
    }
};

} // namespace

gql::Query random_query(Rng& rng) { return QueryFuzzer(rng).build(); }

std::vector<NLGQLRecord> synthetic_records(Rng& rng, std::size_t n) {
    static const double weights[] = {0.25, 0.05, 0.15, 0.1, 0.07, 0.13, 0.2, 0.05};
    std::vector<NLGQLRecord> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        double u = rng.unit();
        int type = 8;
        for (int t = 0; t < 8; ++t) {
            if (u < weights[t]) {
                type = t + 1;
                break;
            }
            u -= weights[t];
        }
        NLGQLRecord r;
        r.query_type_id = type;
        r.nl = "question " + std::to_string(i);
        r.gql = "MATCH (s:stock{name:'" + std::to_string(i) + "'}) RETURN s.stock.code";
        out.push_back(std::move(r));
    }
    return out;
}

} // namespace nl2gql::testing
