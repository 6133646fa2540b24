#include <algorithm>
#include <map>

#include "nl2gql/error.hpp"
#include "nl2gql/rng.hpp"
#include "nl2gql/templates.hpp"
#include "nl2gql/utf8.hpp"

namespace nl2gql {

namespace {

using namespace gql;

bool value_less(const Value& a, const Value& b) {
    if (a.is_numeric() && b.is_numeric()) return a.as_number() < b.as_number();
    if (a.is_string() && b.is_string()) return a.as_string() < b.as_string();
    if (a.is_bool() && b.is_bool()) return a.as_bool() < b.as_bool();
    return a.is_numeric() && !b.is_numeric();
}

class Grounder {
public:
    Grounder(const PropertyGraph& g, std::uint64_t seed) : g_(g), rng_(seed) {}

    // token text ("[t]") -> chosen value
    std::map<std::string, Value, std::less<>> chosen;

    void ground_match(MatchClause& m) {
        for (std::size_t i = 0; i < m.edges.size(); ++i) {
            if (!m.edges[i].alias.empty()) edge_alias_[m.edges[i].alias] = m.edges[i].edge_type;
        }
        for (auto& n : m.nodes) {
            if (!n.name || !is_placeholder_text(*n.name)) continue;
            auto it = chosen.find(*n.name);
            if (it == chosen.end()) {
                auto ids = g_.nodes_by_tag(n.tag);
                if (ids.empty()) throw Error("no '" + n.tag + "' node to fill " + *n.name);
                it = chosen.emplace(*n.name, Value(g_.node(ids[rng_.index(ids.size())]).name)).first;
            }
            if (!it->second.is_string()) throw Error("placeholder " + *n.name + " reused with a non-string value");
            n.name = it->second.as_string();
        }
    }

    void ground_expr(Expr& e) {
        if (e.kind == ExprKind::Compare || e.kind == ExprKind::Contains) {
            for (int side = 0; side < 2; ++side) {
                Expr& slot = e.args[static_cast<std::size_t>(side)];
                const Expr& other = e.args[static_cast<std::size_t>(1 - side)];
                if (other.kind != ExprKind::Property || !is_slot(slot)) continue;
                const bool substring = e.kind == ExprKind::Contains && side == 1;
                fill(slot, other, substring);
            }
        }
        for (auto& a : e.args) ground_expr(a);
        if (is_slot(e)) {
            throw Error("placeholder " + slot_token(e) + " is not compared with a property");
        }
    }

private:
    const PropertyGraph& g_;
    Rng rng_;
    std::map<std::string, std::string, std::less<>> edge_alias_;

    static bool is_slot(const Expr& e) {
        return e.kind == ExprKind::Placeholder ||
               (e.kind == ExprKind::Literal && e.literal.is_string() && is_placeholder_text(e.literal.as_string()));
    }

    static std::string slot_token(const Expr& e) {
        return e.kind == ExprKind::Placeholder ? "[" + e.name + "]" : e.literal.as_string();
    }

    std::vector<Value> observed(const Expr& prop) const {
        std::vector<Value> values;
        if (!prop.tag.empty()) {
            for (NodeId id : g_.nodes_by_tag(prop.tag)) values.push_back(g_.node(id).property(prop.property));
        } else {
            auto it = edge_alias_.find(prop.name);
            if (it == edge_alias_.end()) throw Error("edge alias '" + prop.name + "' not bound in MATCH");
            for (const Edge& e : g_.edges()) {
                if (e.edge_type == it->second) values.push_back(e.property(prop.property));
            }
        }
        values.erase(std::remove_if(values.begin(), values.end(), [](const Value& v) { return v.is_null(); }),
                     values.end());
        std::sort(values.begin(), values.end(), value_less);
        values.erase(std::unique(values.begin(), values.end()), values.end());
        return values;
    }

    void fill(Expr& slot, const Expr& prop, bool substring) {
        const std::string token = slot_token(slot);
        auto it = chosen.find(token);
        if (it == chosen.end()) {
            const auto values = observed(prop);
            if (values.empty()) throw Error("no observed value of '" + print(prop) + "' for " + token);
            Value v = values[rng_.index(values.size())];
            if (substring) {
                if (!v.is_string()) throw Error("CONTAINS slot " + token + " needs a string property");
                const std::size_t len = utf8::length(v.as_string());
                if (len > 2) {
                    const std::size_t count = 2 + rng_.index(len - 1);
                    const std::size_t start = rng_.index(len - count + 1);
                    v = Value(utf8::substr(v.as_string(), start, count));
                }
            }
            it = chosen.emplace(token, std::move(v)).first;
        }
        slot = Expr::make_literal(it->second);
    }
};

std::string replace_tokens(std::string_view text, const std::map<std::string, Value, std::less<>>& chosen) {
    std::string out;
    std::size_t i = 0;
    while (i < text.size()) {
        if (text[i] == '[') {
            const std::size_t close = text.find(']', i);
            if (close != std::string_view::npos) {
                auto it = chosen.find(text.substr(i, close - i + 1));
                if (it != chosen.end()) {
                    out += it->second.to_text();
                    i = close + 1;
                    continue;
                }
            }
        }
        out += text[i++];
    }
    return out;
}

} // namespace

Grounded ground(const TemplatePair& pair, const PropertyGraph& graph, std::uint64_t seed) {
    Query tmpl;
    try {
        tmpl = parse(pair.gql, {.allow_placeholders = true});
    } catch (const ParseError& ex) {
        return Rejection{"parse", ex.what()};
    }
    try {
        check_query(graph.schema(), tmpl);
    } catch (const UnknownSchemaItemError& ex) {
        return Rejection{"schema", ex.what()};
    } catch (const TypeMismatchError& ex) {
        return Rejection{"type", ex.what()};
    }

    Query q = tmpl;
    Grounder grounder(graph, seed);
    try {
        for (auto& c : q.clauses) {
            if (auto* m = std::get_if<MatchClause>(&c)) grounder.ground_match(*m);
        }
        for (auto& c : q.clauses) {
            if (auto* w = std::get_if<WhereClause>(&c)) grounder.ground_expr(w->predicate);
            else if (auto* wi = std::get_if<WithClause>(&c))
                for (auto& it : wi->items) grounder.ground_expr(it.expr);
            else if (auto* r = std::get_if<ReturnClause>(&c))
                for (auto& it : r->items) grounder.ground_expr(it.expr);
            else if (auto* o = std::get_if<OrderByClause>(&c)) grounder.ground_expr(o->key);
        }
    } catch (const Error& ex) {
        return Rejection{"ground", ex.what()};
    }

    NLGQLRecord rec;
    rec.gql = print(q);
    Verified v = execute_verified(graph, rec.gql);
    if (auto* rej = std::get_if<Rejection>(&v)) return *rej;
    rec.answer = std::move(std::get<ResultTable>(v));
    rec.nl = replace_tokens(pair.nl, grounder.chosen);
    rec.template_nl = pair.nl;
    rec.template_gql = print(tmpl);
    rec.query_type_id = pair.query_type_id;
    rec.nodes = pattern_tags(q);
    rec.edges = pattern_edge_types(q);
    return rec;
}

} // namespace nl2gql
