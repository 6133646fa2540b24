#include <algorithm>
#include <set>
#include <tuple>

#include "nl2gql/error.hpp"
#include "nl2gql/schema_linker.hpp"

namespace nl2gql {

namespace {

using namespace gql;

using Step = std::tuple<std::string, std::string, std::string>;  // start tag, edge type, end tag

std::set<Step> path_steps(const JoinPath& path, const GraphSchema& schema) {
    std::set<Step> out;
    for (std::size_t i = 1; i + 1 < path.elements.size(); i += 2) {
        if (const EdgeDef* e = schema.find_edge(path.elements[i])) out.insert({e->start_tag, e->edge_type, e->end_tag});
    }
    return out;
}

bool consistent(const MatchClause& m, const std::set<Step>& steps, const std::set<std::string>& allowed) {
    for (const auto& n : m.nodes) {
        if (!allowed.count(n.tag)) return false;
    }
    for (std::size_t i = 0; i < m.edges.size(); ++i) {
        const bool out = m.edges[i].direction == Direction::Outgoing;
        const std::string& from = out ? m.nodes[i].tag : m.nodes[i + 1].tag;
        const std::string& to = out ? m.nodes[i + 1].tag : m.nodes[i].tag;
        if (!steps.count({from, m.edges[i].edge_type, to})) return false;
    }
    return true;
}

std::set<std::string> aliases_of(const Query& q) {
    std::set<std::string> out;
    for (const auto& c : q.clauses) {
        if (const auto* m = std::get_if<MatchClause>(&c)) {
            for (const auto& n : m->nodes) out.insert(n.alias);
            for (const auto& e : m->edges) out.insert(e.alias);
        }
    }
    return out;
}

std::optional<MatchClause> rewrite(const MatchClause& old, const JoinPath& path, const GraphSchema& schema,
                                   const std::set<std::string>& taken) {
    const auto& el = path.elements;
    std::vector<bool> used_node(old.nodes.size(), false);
    std::vector<bool> used_edge(old.edges.size(), false);
    MatchClause m;
    std::size_t fresh = 0;
    auto fresh_alias = [&] {
        std::string a;
        do {
            a = "n" + std::to_string(fresh++);
        } while (taken.count(a));
        return a;
    };
    for (std::size_t i = 0; i < el.size(); i += 2) {
        NodePattern n;
        n.tag = el[i];
        for (std::size_t k = 0; k < old.nodes.size(); ++k) {
            if (!used_node[k] && old.nodes[k].tag == n.tag) {
                used_node[k] = true;
                n.alias = old.nodes[k].alias;
                n.name = old.nodes[k].name;
                break;
            }
        }
        if (n.alias.empty()) n.alias = fresh_alias();
        m.nodes.push_back(std::move(n));
        if (i + 1 >= el.size()) break;
        const EdgeDef* def = schema.find_edge(el[i + 1]);
        if (!def) return std::nullopt;
        EdgePattern e;
        e.edge_type = def->edge_type;
        e.direction = def->start_tag == el[i] && def->end_tag == el[i + 2] ? Direction::Outgoing : Direction::Incoming;
        for (std::size_t k = 0; k < old.edges.size(); ++k) {
            if (!used_edge[k] && old.edges[k].edge_type == e.edge_type) {
                used_edge[k] = true;
                e.alias = old.edges[k].alias;
                break;
            }
        }
        m.edges.push_back(std::move(e));
    }
    for (std::size_t k = 0; k < old.nodes.size(); ++k) {
        if (!used_node[k] && old.nodes[k].name) return std::nullopt;  // a name filter has no home on the path
    }
    return m;
}

} // namespace

VerifiedMatch verify_match_clause(const Query& candidate, const LinkResult& link, const GraphSchema& schema) {
    VerifiedMatch out{candidate, false, false};
    if (link.resolved_labels.empty() || link.join_path.elements.empty()) return out;

    const auto steps = path_steps(link.join_path, schema);
    std::set<std::string> allowed(link.resolved_labels.begin(), link.resolved_labels.end());
    for (const auto& t : link.join_path.tags()) allowed.insert(t);

    std::size_t match_count = 0;
    bool ok = true;
    for (const auto& c : candidate.clauses) {
        if (const auto* m = std::get_if<MatchClause>(&c)) {
            ++match_count;
            ok = ok && consistent(*m, steps, allowed);
        }
    }
    if (ok) return out;

    out.rewrite_impossible = true;
    if (match_count != 1 || !link.join_path.is_chain) return out;
    Query q = candidate;
    for (auto& c : q.clauses) {
        auto* m = std::get_if<MatchClause>(&c);
        if (!m) continue;
        auto replaced = rewrite(*m, link.join_path, schema, aliases_of(candidate));
        if (!replaced) return out;
        *m = std::move(*replaced);
    }
    try {
        Query reparsed = parse(print(q));
        check_query(schema, reparsed);
        out.query = std::move(reparsed);
    } catch (const Error&) {
        return out;
    }
    out.rewritten = true;
    out.rewrite_impossible = false;
    return out;
}

} // namespace nl2gql
