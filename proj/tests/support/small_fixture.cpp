#include "small_fixture.hpp"

#include <nlohmann/json.hpp>

namespace nl2gql::testing {

GraphSchema steel_schema() { return schema_from_json(nlohmann::json::parse(kSteelSchema)); }

PropertyGraph graph_from_text(const GraphSchema& schema, const std::string& nodes, const std::string& edges) {
    std::istringstream n(nodes);
    std::istringstream e(edges);
    return load_graph(schema, n, e);
}

PropertyGraph steel_graph() { return graph_from_text(steel_schema(), kSteelNodes, kSteelEdges); }

} // namespace nl2gql::testing
