#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "nl2gql/value.hpp"

namespace nl2gql {

struct PropertyDef {
    std::string name;
    ValueKind kind = ValueKind::String;
    std::string zh_gloss;  // empty when absent

    bool operator==(const PropertyDef&) const = default;
};

struct NodeDef {
    std::string tag;
    std::vector<PropertyDef> properties;

    const PropertyDef* find_property(std::string_view name) const;
    bool operator==(const NodeDef&) const = default;
};

struct EdgeDef {
    std::string edge_type;
    std::string start_tag;
    std::string end_tag;
    std::vector<PropertyDef> properties;

    const PropertyDef* find_property(std::string_view name) const;
    bool operator==(const EdgeDef&) const = default;
};

// Every node tag carries an implicit string property "name" holding the
// node's name. It is inserted first when the schema file omits it.
inline constexpr std::string_view kNameProperty = "name";

class GraphSchema {
public:
    GraphSchema() = default;
    // Validates and normalizes; throws SchemaError naming the offending item.
    GraphSchema(std::vector<NodeDef> nodes, std::vector<EdgeDef> edges);

    const std::vector<NodeDef>& node_defs() const { return nodes_; }
    const std::vector<EdgeDef>& edge_defs() const { return edges_; }

    const NodeDef* find_node(std::string_view tag) const;
    const EdgeDef* find_edge(std::string_view edge_type) const;

    bool empty() const { return nodes_.empty() && edges_.empty(); }
    bool operator==(const GraphSchema&) const = default;

private:
    std::vector<NodeDef> nodes_;
    std::vector<EdgeDef> edges_;
};

GraphSchema schema_from_json(const nlohmann::json& doc);
nlohmann::ordered_json schema_to_json(const GraphSchema& schema);
GraphSchema load_schema(const std::filesystem::path& path);

} // namespace nl2gql
