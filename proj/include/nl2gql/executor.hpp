#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "nl2gql/gql.hpp"
#include "nl2gql/graph.hpp"

namespace nl2gql {

struct ResultTable {
    std::vector<std::string> columns;
    std::vector<std::vector<Value>> rows;  // null Values for missing data
    bool ordered = false;                  // query had ORDER BY

    bool operator==(const ResultTable&) const = default;
};

nlohmann::ordered_json to_json(const ResultTable& table);
ResultTable result_table_from_json(const nlohmann::json& j);

// Static check of a query against a schema: every tag, edge type and
// property must be declared and operand kinds must agree. Placeholders
// are typed as unknown. Throws UnknownSchemaItemError / TypeMismatchError.
void check_query(const GraphSchema& schema, const gql::Query& query);

// Homomorphism semantics: distinct aliases may bind the same node. Rows are
// produced in lexicographic order of the bound (node, edge, node, ...) ids,
// ORDER BY sorts stably, comparisons involving null are false.
ResultTable execute(const PropertyGraph& graph, const gql::Query& query);

struct Rejection {
    std::string stage;
    std::string reason;
};

using Verified = std::variant<ResultTable, Rejection>;

// parse + check + execute; any failure becomes a Rejection value.
Verified execute_verified(const PropertyGraph& graph, std::string_view text);

} // namespace nl2gql
