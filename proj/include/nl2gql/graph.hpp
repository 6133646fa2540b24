#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "nl2gql/schema.hpp"
#include "nl2gql/value.hpp"

namespace nl2gql {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;

using PropertyMap = std::map<std::string, Value, std::less<>>;

struct Node {
    NodeId id = 0;
    std::string tag;
    std::string name;
    PropertyMap props;  // never contains "name"

    // "name" resolves to the node name; absent properties are null.
    Value property(std::string_view prop) const;
};

struct Edge {
    EdgeId id = 0;
    std::string edge_type;
    NodeId src = 0;
    NodeId dst = 0;
    PropertyMap props;

    Value property(std::string_view prop) const;
};

// In-memory property graph. Node and edge ids are their load positions;
// every index lists ids in load order. Immutable once built.
class PropertyGraph {
public:
    explicit PropertyGraph(GraphSchema schema);

    // Validates against the schema. Throws DataError / SchemaError.
    NodeId add_node(std::string tag, std::string name, PropertyMap props);
    EdgeId add_edge(std::string edge_type, std::string_view start_tag, std::string_view start_name,
                    std::string_view end_tag, std::string_view end_name, PropertyMap props);

    const GraphSchema& schema() const { return schema_; }
    const std::vector<Node>& nodes() const { return nodes_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const Node& node(NodeId id) const { return nodes_.at(id); }
    const Edge& edge(EdgeId id) const { return edges_.at(id); }

    std::span<const NodeId> nodes_by_tag(std::string_view tag) const;
    std::span<const NodeId> node_by_name(std::string_view name) const;
    std::optional<NodeId> find_node(std::string_view tag, std::string_view name) const;

    std::span<const EdgeId> out_edges(NodeId id) const { return out_.at(id); }
    std::span<const EdgeId> in_edges(NodeId id) const { return in_.at(id); }

    // Every name in the graph, mapped to the node ids carrying it.
    const std::unordered_map<std::string, std::vector<NodeId>>& name_index() const {
        return by_name_;
    }

private:
    GraphSchema schema_;
    std::vector<Node> nodes_;
    std::vector<Edge> edges_;
    std::unordered_map<std::string, std::vector<NodeId>> by_tag_;
    std::unordered_map<std::string, std::vector<NodeId>> by_name_;
    std::map<std::pair<std::string, std::string>, NodeId, std::less<>> by_key_;
    std::vector<std::vector<EdgeId>> out_;
    std::vector<std::vector<EdgeId>> in_;
};

struct LoadSummary {
    std::size_t node_count = 0;
    std::size_t edge_count = 0;
    std::map<std::string, std::size_t> nodes_per_tag;
    std::map<std::string, std::size_t> edges_per_type;
};

// Line-delimited JSON records; see README for the record shapes.
PropertyGraph load_graph(const GraphSchema& schema, std::istream& nodes, std::istream& edges);
PropertyGraph load_graph(const GraphSchema& schema, const std::filesystem::path& nodes_path,
                         const std::filesystem::path& edges_path);

void write_nodes(const PropertyGraph& graph, std::ostream& out);
void write_edges(const PropertyGraph& graph, std::ostream& out);

LoadSummary summarize(const PropertyGraph& graph);

} // namespace nl2gql
