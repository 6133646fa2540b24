#include <algorithm>
#include <set>

#include "nl2gql/error.hpp"
#include "nl2gql/schema_linker.hpp"

namespace nl2gql {

GraphSchema sub_schema(const GraphSchema& schema, const std::vector<std::string>& tags,
                       const std::vector<std::string>& edge_types) {
    const std::set<std::string> keep_tags(tags.begin(), tags.end());
    const std::set<std::string> keep_edges(edge_types.begin(), edge_types.end());
    std::vector<NodeDef> nodes;
    for (const auto& n : schema.node_defs()) {
        if (keep_tags.count(n.tag)) nodes.push_back(n);
    }
    std::vector<EdgeDef> edges;
    for (const auto& e : schema.edge_defs()) {
        if (keep_edges.count(e.edge_type) && keep_tags.count(e.start_tag) && keep_tags.count(e.end_tag)) {
            edges.push_back(e);
        }
    }
    return GraphSchema(std::move(nodes), std::move(edges));
}

LinkResult link(std::string_view question, const LabelDictionary& dict, const GraphSchema& schema,
                const std::vector<NLGQLRecord>& pool, const SimilarityScorer& scorer) {
    LabelLinks links = link_labels(question, dict, pool, scorer);
    LinkResult out;
    out.mentions = std::move(links.mentions);
    out.resolved_labels = std::move(links.resolved_labels);
    if (out.resolved_labels.empty()) {
        out.relevant_schema = schema;
        out.fell_back_to_full = true;
        return out;
    }
    try {
        out.join_path = join_tables(out.resolved_labels, schema);
    } catch (const DisconnectedLabelsError&) {
        out.relevant_schema = schema;
        out.fell_back_to_full = true;
        return out;
    }
    std::vector<std::string> tags = out.join_path.tags();
    for (const auto& l : out.resolved_labels) {
        if (std::find(tags.begin(), tags.end(), l) == tags.end()) tags.push_back(l);
    }
    out.relevant_schema = sub_schema(schema, tags, out.join_path.edge_types());
    return out;
}

} // namespace nl2gql
