#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "nl2gql/error.hpp"
#include "nl2gql/schema_linker.hpp"

namespace nl2gql {

std::vector<std::string> JoinPath::tags() const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < elements.size(); i += 2) {
        if (std::find(out.begin(), out.end(), elements[i]) == out.end()) out.push_back(elements[i]);
    }
    return out;
}

std::vector<std::string> JoinPath::edge_types() const {
    std::vector<std::string> out;
    for (std::size_t i = 1; i < elements.size(); i += 2) {
        if (std::find(out.begin(), out.end(), elements[i]) == out.end()) out.push_back(elements[i]);
    }
    return out;
}

namespace {

using Path = std::vector<std::string>;

// A* over tags with h = 0. The open list is ordered by (f, path) so that
// equal-cost paths leave in lexicographic order.
Path a_star(const std::string& from, const std::string& to, const GraphSchema& schema) {
    std::set<std::pair<std::size_t, Path>> open;
    std::set<std::string> closed;
    open.insert({0, Path{from}});
    while (!open.empty()) {
        auto [f, path] = *open.begin();
        open.erase(open.begin());
        const std::string& tag = path.back();
        if (!closed.insert(tag).second) continue;
        if (tag == to) return path;
        for (const auto& e : schema.edge_defs()) {
            if (e.start_tag == e.end_tag) continue;
            std::string next;
            if (e.start_tag == tag) next = e.end_tag;
            else if (e.end_tag == tag) next = e.start_tag;
            else continue;
            if (closed.count(next)) continue;
            Path p = path;
            p.push_back(e.edge_type);
            p.push_back(next);
            const std::size_t g = (p.size() - 1) / 2;
            open.insert({g, std::move(p)});
        }
    }
    throw DisconnectedLabelsError(from, to);
}

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
    bool unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[std::max(a, b)] = std::min(a, b);
        return true;
    }
};

// Undirected edge between two tags through an edge type; tags ordered.
struct Link {
    std::string a;
    std::string edge;
    std::string b;
    auto operator<=>(const Link&) const = default;
};

JoinPath flatten(const std::set<Link>& links, const std::string& root) {
    std::map<std::string, std::vector<std::pair<std::string, std::string>>> adj;  // tag -> (edge, other)
    for (const auto& l : links) {
        adj[l.a].emplace_back(l.edge, l.b);
        adj[l.b].emplace_back(l.edge, l.a);
    }
    for (auto& [tag, list] : adj) std::sort(list.begin(), list.end());

    const bool simple_path = links.size() + 1 == adj.size() &&
                             std::all_of(adj.begin(), adj.end(), [](const auto& kv) { return kv.second.size() <= 2; });
    JoinPath out;
    if (simple_path) {
        std::string start;
        for (const auto& [tag, list] : adj) {
            if (list.size() == 1) {
                start = tag;
                break;
            }
        }
        std::string prev;
        std::string cur = start;
        out.elements.push_back(cur);
        while (true) {
            const auto& list = adj[cur];
            auto it = std::find_if(list.begin(), list.end(), [&](const auto& p) { return p.second != prev; });
            if (it == list.end() || (list.size() == 1 && !prev.empty())) break;
            out.elements.push_back(it->first);
            out.elements.push_back(it->second);
            prev = cur;
            cur = it->second;
        }
        out.is_chain = true;
        return out;
    }
    // Depth-first walk over a spanning tree of the merged paths.
    std::set<std::string> seen;
    auto visit = [&](auto& self, const std::string& v) -> void {
        seen.insert(v);
        for (const auto& [edge, w] : adj[v]) {
            if (seen.count(w)) continue;
            out.elements.push_back(edge);
            out.elements.push_back(w);
            self(self, w);
            out.elements.push_back(edge);
            out.elements.push_back(v);
        }
    };
    out.elements.push_back(root);
    visit(visit, root);
    // Drop the return leg after the last newly reached tag.
    std::set<std::string> reached;
    std::size_t last_new = 0;
    for (std::size_t i = 0; i < out.elements.size(); i += 2) {
        if (reached.insert(out.elements[i]).second) last_new = i;
    }
    out.elements.resize(last_new + 1);
    out.is_chain = false;
    return out;
}

} // namespace

JoinPath join_tables(const std::vector<std::string>& labels_in, const GraphSchema& schema) {
    std::vector<std::string> labels = labels_in;
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    for (const auto& l : labels) {
        if (!schema.find_node(l)) throw UnknownSchemaItemError("tag '" + l + "'");
    }
    JoinPath out;
    if (labels.empty()) return out;
    if (labels.size() == 1) {
        out.elements = {labels[0]};
        return out;
    }
    if (labels.size() == 2) {
        out.elements = a_star(labels[0], labels[1], schema);
        return out;
    }

    struct Pair {
        std::size_t dist;
        std::size_t i;
        std::size_t j;
        Path path;
    };
    std::vector<Pair> pairs;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        for (std::size_t j = i + 1; j < labels.size(); ++j) {
            Path p = a_star(labels[i], labels[j], schema);
            pairs.push_back({(p.size() - 1) / 2, i, j, std::move(p)});
        }
    }
    std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) { return a.dist < b.dist; });
    UnionFind uf(labels.size());
    std::set<Link> links;
    for (const auto& p : pairs) {
        if (!uf.unite(p.i, p.j)) continue;
        for (std::size_t k = 1; k + 1 < p.path.size(); k += 2) {
            const std::string& x = p.path[k - 1];
            const std::string& y = p.path[k + 1];
            links.insert(x < y ? Link{x, p.path[k], y} : Link{y, p.path[k], x});
        }
    }
    return flatten(links, labels[0]);
}

} // namespace nl2gql
