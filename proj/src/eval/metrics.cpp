#include <algorithm>
#include <cmath>

#include "nl2gql/error.hpp"
#include "nl2gql/eval.hpp"

namespace nl2gql {

namespace {

std::vector<gql::ClauseText> components(const gql::Query& q) {
    auto parts = gql::split_clauses(gql::canonicalize(q));
    std::sort(parts.begin(), parts.end());
    return parts;
}

bool cells_equal(const Value& a, const Value& b) {
    if (a.is_null() || b.is_null()) return a.is_null() && b.is_null();
    if (a.is_numeric() && b.is_numeric()) return std::fabs(a.as_number() - b.as_number()) <= kExTolerance;
    return a == b;
}

bool rows_equal(const std::vector<Value>& a, const std::vector<Value>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!cells_equal(a[i], b[i])) return false;
    }
    return true;
}

} // namespace

int em_score(std::string_view pred, std::string_view gold) {
    gql::Query g;
    try {
        g = gql::parse(gold);
    } catch (const ParseError& ex) {
        throw DataError(std::string("gold query does not parse: ") + ex.what());
    }
    gql::Query p;
    try {
        p = gql::parse(pred);
    } catch (const ParseError&) {
        return 0;
    }
    return components(p) == components(g) ? 1 : 0;
}

bool tables_match(const ResultTable& pred, const ResultTable& gold) {
    if (pred.columns.size() != gold.columns.size() || pred.rows.size() != gold.rows.size()) return false;
    if (gold.ordered) {
        for (std::size_t i = 0; i < gold.rows.size(); ++i) {
            if (!rows_equal(pred.rows[i], gold.rows[i])) return false;
        }
        return true;
    }
    std::vector<bool> used(gold.rows.size(), false);
    for (const auto& row : pred.rows) {
        bool found = false;
        for (std::size_t j = 0; j < gold.rows.size(); ++j) {
            if (!used[j] && rows_equal(row, gold.rows[j])) {
                used[j] = true;
                found = true;
                break;
            }
        }
        if (!found) return false;
    }
    return true;
}

int ex_score(const PropertyGraph& graph, std::string_view pred, std::string_view gold) {
    Verified g = execute_verified(graph, gold);
    if (auto* rej = std::get_if<Rejection>(&g)) throw DataError("gold query does not execute: " + rej->reason);
    Verified p = execute_verified(graph, pred);
    if (std::holds_alternative<Rejection>(p)) return 0;
    return tables_match(std::get<ResultTable>(p), std::get<ResultTable>(g)) ? 1 : 0;
}

} // namespace nl2gql
