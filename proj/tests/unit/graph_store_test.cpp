#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "generators.hpp"
#include "nl2gql/error.hpp"
#include "small_fixture.hpp"

using namespace nl2gql;
using namespace nl2gql::testing;

namespace {

GraphSchema schema_of(const char* text) { return schema_from_json(nlohmann::json::parse(text)); }

std::multiset<std::string> node_keys(const PropertyGraph& g) {
    std::multiset<std::string> out;
    for (const auto& n : g.nodes()) out.insert(n.tag + "|" + n.name + "|" + nlohmann::json(n.props.size()).dump());
    return out;
}

std::multiset<std::string> edge_keys(const PropertyGraph& g) {
    std::multiset<std::string> out;
    for (const auto& e : g.edges()) {
        std::string k = e.edge_type + "|" + g.node(e.src).tag + ":" + g.node(e.src).name + "|" + g.node(e.dst).tag +
                        ":" + g.node(e.dst).name;
        for (const auto& [p, v] : e.props) k += "|" + p + "=" + v.to_literal();
        out.insert(k);
    }
    return out;
}

} // namespace

TEST(Schema, LoadsTwoTagsAndOneEdgeType) {
    GraphSchema s = schema_of(R"({"nodes": [
        {"tag": "stock", "properties": [["code", "string"]]},
        {"tag": "stock_data", "properties": [["opening_price", "float", "开盘价"]]}],
      "edges": [{"edge": "has_stock_data", "start_tag": "stock", "end_tag": "stock_data", "properties": []}]})");
    EXPECT_EQ(s.node_defs().size(), 2u);
    ASSERT_EQ(s.edge_defs().size(), 1u);
    EXPECT_EQ(s.edge_defs()[0].edge_type, "has_stock_data");
    const NodeDef* sd = s.find_node("stock_data");
    ASSERT_NE(sd, nullptr);
    ASSERT_NE(sd->find_property("opening_price"), nullptr);
    EXPECT_EQ(sd->find_property("opening_price")->kind, ValueKind::Float);
    EXPECT_EQ(sd->find_property("opening_price")->zh_gloss, "开盘价");
}

TEST(Schema, ImplicitNamePropertyComesFirst) {
    GraphSchema s = schema_of(R"({"nodes": [{"tag": "stock", "properties": [["code", "string"]]}], "edges": []})");
    const auto& props = s.find_node("stock")->properties;
    ASSERT_EQ(props.size(), 2u);
    EXPECT_EQ(props[0].name, "name");
    EXPECT_EQ(props[0].kind, ValueKind::String);
}

TEST(Schema, EmptySchemaIsValid) {
    GraphSchema s = schema_of(R"({"nodes": [], "edges": []})");
    EXPECT_TRUE(s.empty());
}

TEST(Schema, UnknownTagInEdgeNamesTheTag) {
    try {
        schema_of(R"({"nodes": [{"tag": "stock", "properties": []}],
                      "edges": [{"edge": "haunts", "start_tag": "stock", "end_tag": "ghost", "properties": []}]})");
        FAIL() << "expected SchemaError";
    } catch (const SchemaError& e) {
        EXPECT_NE(std::string(e.what()).find("ghost"), std::string::npos);
    }
}

TEST(Schema, DuplicateTagAndBadKindAreRejected) {
    EXPECT_THROW(schema_of(R"({"nodes": [{"tag": "a", "properties": []}, {"tag": "a", "properties": []}], "edges": []})"),
                 SchemaError);
    EXPECT_THROW(schema_of(R"({"nodes": [{"tag": "a", "properties": [["p", "decimal"]]}], "edges": []})"), Error);
}

TEST(Schema, MalformedFileIsAnError) {
    const auto path = std::filesystem::temp_directory_path() / "nl2gql_bad_schema.json";
    std::ofstream(path) << "{\"nodes\": [";
    EXPECT_THROW(load_schema(path), Error);
    std::filesystem::remove(path);
}

TEST(Schema, JsonRoundTrip) {
    GraphSchema s = steel_schema();
    EXPECT_EQ(schema_from_json(nlohmann::json::parse(schema_to_json(s).dump())), s);
}

TEST(Graph, CountsNodesAndEdges) {
    GraphSchema s = steel_schema();
    const std::string nodes = R"({"tag": "trade", "name": "steel", "props": {}}
{"tag": "stock", "name": "A", "props": {}}
{"tag": "stock", "name": "B", "props": {}}
{"tag": "stock", "name": "C", "props": {}}
)";
    const std::string edges =
        R"({"edge": "belong_to", "start_name": "A", "start_tag": "stock", "end_name": "steel", "end_tag": "trade", "props": {}}
{"edge": "belong_to", "start_name": "B", "start_tag": "stock", "end_name": "steel", "end_tag": "trade", "props": {}}
{"edge": "belong_to", "start_name": "C", "start_tag": "stock", "end_name": "steel", "end_tag": "trade", "props": {}}
)";
    PropertyGraph g = graph_from_text(s, nodes, edges);
    EXPECT_EQ(g.nodes().size(), 4u);
    EXPECT_EQ(g.edges().size(), 3u);
    auto stocks = g.nodes_by_tag("stock");
    EXPECT_EQ(std::vector<NodeId>(stocks.begin(), stocks.end()), (std::vector<NodeId>{1, 2, 3}));
    EXPECT_TRUE(g.nodes_by_tag("ghost").empty());
}

TEST(Graph, EmptyFilesGiveEmptyGraph) {
    PropertyGraph g = graph_from_text(steel_schema(), "", "\n");
    EXPECT_TRUE(g.nodes().empty());
    EXPECT_TRUE(g.edges().empty());
}

TEST(Graph, WrongEndpointTagIsADataErrorWithLine) {
    const std::string nodes = R"({"tag": "trade", "name": "steel", "props": {}}
{"tag": "stock", "name": "A", "props": {}}
)";
    const std::string edges =
        R"({"edge": "belong_to", "start_name": "A", "start_tag": "stock", "end_name": "steel", "end_tag": "trade", "props": {}}
{"edge": "belong_to", "start_name": "steel", "start_tag": "trade", "end_name": "A", "end_tag": "stock", "props": {}}
)";
    try {
        graph_from_text(steel_schema(), nodes, edges);
        FAIL() << "expected DataError";
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
    }
}

TEST(Graph, DuplicateNodeAndWrongKindAreRejected) {
    EXPECT_THROW(graph_from_text(steel_schema(),
                                 "{\"tag\": \"stock\", \"name\": \"A\", \"props\": {}}\n"
                                 "{\"tag\": \"stock\", \"name\": \"A\", \"props\": {}}\n",
                                 ""),
                 DataError);
    EXPECT_THROW(graph_from_text(steel_schema(), "{\"tag\": \"stock\", \"name\": \"A\", \"props\": {\"listing_year\": \"x\"}}\n", ""),
                 DataError);
    EXPECT_THROW(graph_from_text(steel_schema(), "{\"tag\": \"stock\", \"name\": \"A\", \"props\": {\"nope\": 1}}\n", ""),
                 DataError);
    EXPECT_THROW(graph_from_text(steel_schema(), "not json\n", ""), DataError);
}

TEST(Graph, SharedNameAcrossTags) {
    PropertyGraph g = fixture_graph();
    auto ids = g.node_by_name("Sam");
    ASSERT_EQ(ids.size(), 2u);
    std::set<std::string> tags{g.node(ids[0]).tag, g.node(ids[1]).tag};
    EXPECT_EQ(tags, (std::set<std::string>{"chairman", "fund_manager"}));
    EXPECT_TRUE(g.find_node("chairman", "Sam").has_value());
    EXPECT_FALSE(g.find_node("stock", "Sam").has_value());
}

TEST(Graph, MissingPropertyIsNullAndNameResolves) {
    PropertyGraph g = steel_graph();
    const Node& c = g.node(*g.find_node("stock", "C"));
    EXPECT_TRUE(c.property("listing_year").is_null());
    EXPECT_EQ(c.property("name"), Value("C"));
    EXPECT_EQ(c.property("code"), Value("600002"));
}

TEST(Graph, TagsPartitionTheNodeSet) {
    PropertyGraph g = fixture_graph();
    std::vector<NodeId> all;
    for (const auto& d : g.schema().node_defs()) {
        auto ids = g.nodes_by_tag(d.tag);
        all.insert(all.end(), ids.begin(), ids.end());
    }
    std::sort(all.begin(), all.end());
    ASSERT_EQ(all.size(), g.nodes().size());
    for (std::size_t i = 0; i < all.size(); ++i) EXPECT_EQ(all[i], i);
}

TEST(Graph, StoredKindsMatchTheSchema) {
    PropertyGraph g = fixture_graph();
    for (const auto& n : g.nodes()) {
        const NodeDef* d = g.schema().find_node(n.tag);
        for (const auto& [k, v] : n.props) EXPECT_EQ(v.kind(), d->find_property(k)->kind) << n.name << "." << k;
    }
    for (const auto& e : g.edges()) {
        const EdgeDef* d = g.schema().find_edge(e.edge_type);
        for (const auto& [k, v] : e.props) EXPECT_EQ(v.kind(), d->find_property(k)->kind);
    }
}

TEST(Graph, SerializeRoundTripIsIsomorphic) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng rng(seed);
        GraphSchema s = random_shape_schema(rng);
        PropertyGraph g = random_graph(rng, s, 40);
        std::ostringstream n;
        std::ostringstream e;
        write_nodes(g, n);
        write_edges(g, e);
        PropertyGraph h = graph_from_text(s, n.str(), e.str());
        EXPECT_EQ(node_keys(g), node_keys(h));
        EXPECT_EQ(edge_keys(g), edge_keys(h));
    }
}

TEST(Graph, ChineseNamesSurviveByteExact) {
    PropertyGraph g = steel_graph();
    std::ostringstream n;
    write_nodes(g, n);
    EXPECT_NE(n.str().find("钢铁"), std::string::npos);
    EXPECT_TRUE(g.find_node("trade", "钢铁").has_value());
}

TEST(Graph, SummaryCountsPerTag) {
    LoadSummary s = summarize(steel_graph());
    EXPECT_EQ(s.node_count, 10u);
    EXPECT_EQ(s.edge_count, 8u);
    EXPECT_EQ(s.nodes_per_tag.at("stock"), 4u);
    EXPECT_EQ(s.edges_per_type.at("belong_to"), 4u);
}

TEST(Value, JsonAndLiteralForms) {
    EXPECT_EQ(Value(std::int64_t{3}).to_literal(), "3");
    EXPECT_EQ(Value(3.0).to_literal(), "3.0");
    EXPECT_EQ(Value("O'Neil").to_literal(), "'O\\'Neil'");
    EXPECT_EQ(value_from_json(to_json(Value(2.5))), Value(2.5));
    EXPECT_EQ(value_from_json(to_json(Value(std::int64_t{7}))), Value(std::int64_t{7}));
    EXPECT_TRUE(value_from_json(to_json(Value())).is_null());
    EXPECT_EQ(format_double(0.1), "0.1");
}
