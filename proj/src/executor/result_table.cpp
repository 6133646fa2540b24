#include <nlohmann/json.hpp>

#include "nl2gql/error.hpp"
#include "nl2gql/executor.hpp"

namespace nl2gql {

nlohmann::ordered_json to_json(const ResultTable& table) {
    nlohmann::ordered_json j;
    j["columns"] = table.columns;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        auto r = nlohmann::ordered_json::array();
        for (const auto& v : row) r.push_back(nlohmann::ordered_json(to_json(v)));
        rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
    j["ordered"] = table.ordered;
    return j;
}

ResultTable result_table_from_json(const nlohmann::json& j) {
    ResultTable t;
    try {
        t.columns = j.at("columns").get<std::vector<std::string>>();
        for (const auto& r : j.at("rows")) {
            std::vector<Value> row;
            for (const auto& v : r) row.push_back(value_from_json(v));
            if (row.size() != t.columns.size()) throw FormatError("row arity differs from column count");
            t.rows.push_back(std::move(row));
        }
        t.ordered = j.value("ordered", false);
    } catch (const nlohmann::json::exception& ex) {
        throw FormatError(std::string("malformed result table: ") + ex.what());
    }
    return t;
}

} // namespace nl2gql
