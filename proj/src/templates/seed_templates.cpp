#include "nl2gql/error.hpp"
#include "nl2gql/templates.hpp"

namespace nl2gql {

std::string_view to_string(SlotKind kind) {
    switch (kind) {
    case SlotKind::Entity: return "entity";
    case SlotKind::Property: return "property";
    case SlotKind::Property2: return "property2";
    case SlotKind::RProperty: return "r_property";
    case SlotKind::Numeric: return "numeric";
    case SlotKind::String: return "string";
    case SlotKind::Relation: return "relation";
    case SlotKind::NodeTag: return "node_tag";
    }
    return "?";
}

namespace {

using PC = PropertyConstraint;

PlaceholderSlot tag(std::string token) { return {std::move(token), SlotKind::NodeTag, "", PC::Any}; }
PlaceholderSlot rel(std::string token) { return {std::move(token), SlotKind::Relation, "", PC::Any}; }
PlaceholderSlot entity(std::string token, std::string owner) {
    return {std::move(token), SlotKind::Entity, std::move(owner), PC::Any};
}
PlaceholderSlot prop(std::string token, SlotKind kind, std::string owner, PC c) {
    return {std::move(token), kind, std::move(owner), c};
}

std::vector<QueryTemplate> build() {
    std::vector<QueryTemplate> t;
    t.push_back({1, "Entity property",
                 "The generated NL and GQL are both related to simple property queries of nodes and do not "
                 "involve any computations.",
                 "What is [entity]'s [property]?",
                 "MATCH (s:node{name:'[entity]'}) RETURN s.node.[property]",
                 {tag("node"), entity("[entity]", "node"), prop("[property]", SlotKind::Property, "node", PC::AnyButName)},
                 {}});
    t.push_back({2, "Numerical sorting",
                 "The generated NL and GQL are both related to sorting concepts and numerical values.",
                 "The [property2] of node with the highest [property1]?",
                 "MATCH (s:node) WITH s.node.[property2] AS n1, s.node.[property1] AS n2 ORDER BY n2 DESC LIMIT 1 "
                 "RETURN n1",
                 {tag("node"), prop("[property2]", SlotKind::Property2, "node", PC::Any),
                  prop("[property1]", SlotKind::Property, "node", PC::Numeric)},
                 {}});
    t.push_back({3, "Relationship inference",
                 "The generated NL and GQL are both related to reasoning about relationships between nodes and "
                 "edges.",
                 "The [property] of node1 rel2 by [entity]?",
                 "MATCH (s1:node1)<-[:rel1]-(s2:node2)<-[:rel2]-(s3:node3{name:'[entity]'}) RETURN "
                 "s1.node1.[property]",
                 {tag("node1"), tag("node2"), tag("node3"), rel("rel1"), rel("rel2"), entity("[entity]", "node3"),
                  prop("[property]", SlotKind::Property, "node1", PC::Any)},
                 {{"rel1", "node2", "node1"}, {"rel2", "node3", "node2"}}});
    t.push_back({4, "Yes/No question",
                 "The generated NL and GQL both pertain to 'whether' or 'existence' related queries.",
                 "Is the [property] of the [entity] greater than [mount]?",
                 "MATCH (s:node{name:'[entity]'}) RETURN s.node.[property] > [mount]",
                 {tag("node"), entity("[entity]", "node"), prop("[property]", SlotKind::Property, "node", PC::Numeric),
                  {"[mount]", SlotKind::Numeric, "[property]", PC::Numeric}},
                 {}});
    t.push_back({5, "Relationship filtering",
                 "The generated NL and GQL are both related to filtering relationships on multi-hop subgraphs "
                 "associated with nodes.",
                 "The [property] of node2 that rel [entity1] and [entity2]?",
                 "MATCH (s1:node1{name:'[entity1]'})<-[:rel]-(s2:node2)-[:rel]->(s3:node1{name:'[entity2]'}) RETURN "
                 "s2.node2.[property]",
                 {tag("node1"), tag("node2"), rel("rel"), entity("[entity1]", "node1"), entity("[entity2]", "node1"),
                  prop("[property]", SlotKind::Property, "node2", PC::Any)},
                 {{"rel", "node2", "node1"}}});
    t.push_back({6, "Attribute comparison",
                 "The generated NL and GQL are both related to aggregate calculations of node properties.",
                 "How much does the [property] of [entity1] differ from that of [entity2]?",
                 "MATCH (s1:node{name:'[entity1]'}) WITH s1.node.[property] AS t1 MATCH (s2:node{name:'[entity2]'}) "
                 "WITH ABS(s2.node.[property] - t1) AS abs_diff RETURN abs_diff",
                 {tag("node"), entity("[entity1]", "node"), entity("[entity2]", "node"),
                  prop("[property]", SlotKind::Property, "node", PC::Numeric)},
                 {}});
    t.push_back({7, "Edge property",
                 "The generated NL and GQL are both related to comparing and aggregating calculations of edge "
                 "properties.",
                 "The [property] of node2 that rel [entity] with [r_property] less than [m]?",
                 "MATCH (s1:node1{name:'[entity]'})-[r:rel]->(s2:node2) WHERE r.[r_property] < [m] RETURN "
                 "s2.node2.[property]",
                 {tag("node1"), tag("node2"), rel("rel"), entity("[entity]", "node1"),
                  prop("[property]", SlotKind::Property, "node2", PC::Any),
                  prop("[r_property]", SlotKind::RProperty, "rel", PC::Numeric),
                  {"[m]", SlotKind::Numeric, "[r_property]", PC::Numeric}},
                 {{"rel", "node1", "node2"}}});
    t.push_back({8, "String filtering",
                 "The generated NL and GQL are both related to string matching.",
                 "The [property] of the node containing the [string]?",
                 "MATCH (s:node) WHERE s.node.[property] CONTAINS '[string]' RETURN s.node.[property]",
                 {tag("node"), prop("[property]", SlotKind::Property, "node", PC::String),
                  {"[string]", SlotKind::String, "[property]", PC::String}},
                 {}});
    return t;
}

} // namespace

const std::vector<QueryTemplate>& seed_templates() {
    static const std::vector<QueryTemplate> templates = build();
    return templates;
}

const QueryTemplate& seed_template(int query_type_id) {
    if (query_type_id < 1 || query_type_id > kQueryTypeCount) {
        throw Error("query type id out of range: " + std::to_string(query_type_id));
    }
    return seed_templates()[static_cast<std::size_t>(query_type_id - 1)];
}

} // namespace nl2gql
