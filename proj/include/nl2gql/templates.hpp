#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "nl2gql/executor.hpp"

namespace nl2gql {

enum class SlotKind { Entity, Property, Property2, RProperty, Numeric, String, Relation, NodeTag };

std::string_view to_string(SlotKind kind);

// What a property slot may bind to.
enum class PropertyConstraint { Any, AnyButName, Numeric, String };

struct PlaceholderSlot {
    std::string token;  // "[entity]", "[property1]", "node2", "rel"
    SlotKind kind = SlotKind::Entity;
    // Property and entity slots: the node_tag or relation token they belong to.
    std::string owner;
    PropertyConstraint constraint = PropertyConstraint::Any;
};

// A relation slot joins two node_tag slots in schema direction.
struct RelationShape {
    std::string token;
    std::string start;  // node_tag token at the edge's start_tag
    std::string end;
};

struct QueryTemplate {
    int query_type_id = 0;
    std::string type_name;    // "Entity property"
    std::string description;  // query type description used in generation prompts
    std::string nl_template;
    std::string gql_template;
    std::vector<PlaceholderSlot> slots;
    std::vector<RelationShape> relations;
};

inline constexpr int kQueryTypeCount = 8;

// The eight canonical templates, ids 1..8 in order.
const std::vector<QueryTemplate>& seed_templates();
const QueryTemplate& seed_template(int query_type_id);

// A template pair: entity and value placeholders still present.
struct TemplatePair {
    int query_type_id = 0;
    std::string nl;
    std::string gql;
};

// Fills node_tag, relation and property slots with schema items chosen by a
// seeded generator. Throws NoCompatibleSlotError naming the first slot that
// cannot be satisfied.
TemplatePair instantiate(const QueryTemplate& tmpl, const GraphSchema& schema, std::uint64_t seed);

struct NLGQLRecord {
    std::string nl;
    std::string gql;
    std::string template_nl;
    std::string template_gql;
    ResultTable answer;
    int query_type_id = 0;
    std::vector<std::string> nodes;
    std::vector<std::string> edges;

    bool operator==(const NLGQLRecord&) const = default;
};

// Replaces every placeholder with a literal that occurs in the graph:
// name filters get a node name of that tag, bare [m] slots a distinct
// observed value of the compared property, '[string]' under CONTAINS a
// substring of at least two code points. Repeated occurrences of one
// placeholder share a single value in NL and GQL.
using Grounded = std::variant<NLGQLRecord, Rejection>;
Grounded ground(const TemplatePair& pair, const PropertyGraph& graph, std::uint64_t seed);

nlohmann::ordered_json to_json(const NLGQLRecord& record);
NLGQLRecord record_from_json(const nlohmann::json& j);

// Uniqueness key: the canonical print of the template GQL.
std::string template_key(std::string_view template_gql);

class DataPool {
public:
    // Returns true when the record introduced a new template.
    bool append(NLGQLRecord record);

    const std::vector<NLGQLRecord>& records() const { return records_; }
    std::size_t size() const { return records_.size(); }
    bool empty() const { return records_.empty(); }
    std::size_t unique_template_count() const { return templates_.size(); }
    bool contains_template(std::string_view template_gql) const;
    std::size_t count_of_type(int query_type_id) const;

private:
    std::vector<NLGQLRecord> records_;
    std::set<std::string, std::less<>> templates_;
};

struct PoolStats {
    std::size_t total = 0;
    std::map<int, std::size_t> per_type;  // every id 1..8 present
    std::size_t unique_templates = 0;
    double avg_nodes = 0.0;
    double avg_edges = 0.0;
};

PoolStats pool_stats(const DataPool& pool);

void write_records(const std::vector<NLGQLRecord>& records, std::ostream& out);
void write_records(const std::vector<NLGQLRecord>& records, const std::filesystem::path& path);
std::vector<NLGQLRecord> read_records(std::istream& in);
std::vector<NLGQLRecord> read_records(const std::filesystem::path& path);
DataPool pool_from_records(std::vector<NLGQLRecord> records);

} // namespace nl2gql
