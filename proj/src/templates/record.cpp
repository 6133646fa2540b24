#include <fstream>
#include <istream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "nl2gql/error.hpp"
#include "nl2gql/templates.hpp"

namespace nl2gql {

nlohmann::ordered_json to_json(const NLGQLRecord& r) {
    nlohmann::ordered_json j;
    j["nl"] = r.nl;
    j["gql"] = r.gql;
    j["template_nl"] = r.template_nl;
    j["template_gql"] = r.template_gql;
    j["answer"] = to_json(r.answer);
    j["query_type_id"] = r.query_type_id;
    j["nodes"] = r.nodes;
    j["edges"] = r.edges;
    return j;
}

NLGQLRecord record_from_json(const nlohmann::json& j) {
    NLGQLRecord r;
    try {
        r.nl = j.at("nl").get<std::string>();
        r.gql = j.at("gql").get<std::string>();
        r.template_nl = j.at("template_nl").get<std::string>();
        r.template_gql = j.at("template_gql").get<std::string>();
        r.answer = result_table_from_json(j.at("answer"));
        r.query_type_id = j.at("query_type_id").get<int>();
        r.nodes = j.at("nodes").get<std::vector<std::string>>();
        r.edges = j.at("edges").get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& ex) {
        throw FormatError(std::string("malformed record: ") + ex.what());
    }
    return r;
}

std::string template_key(std::string_view template_gql) {
    return gql::print(gql::canonicalize(gql::parse(template_gql, {.allow_placeholders = true})));
}

bool DataPool::append(NLGQLRecord record) {
    const bool fresh = templates_.insert(template_key(record.template_gql)).second;
    records_.push_back(std::move(record));
    return fresh;
}

bool DataPool::contains_template(std::string_view template_gql) const {
    return templates_.count(template_key(template_gql)) > 0;
}

std::size_t DataPool::count_of_type(int query_type_id) const {
    std::size_t n = 0;
    for (const auto& r : records_) n += r.query_type_id == query_type_id;
    return n;
}

PoolStats pool_stats(const DataPool& pool) {
    PoolStats s;
    for (int t = 1; t <= kQueryTypeCount; ++t) s.per_type[t] = 0;
    std::size_t nodes = 0;
    std::size_t edges = 0;
    for (const auto& r : pool.records()) {
        ++s.per_type[r.query_type_id];
        nodes += r.nodes.size();
        edges += r.edges.size();
    }
    s.total = pool.size();
    s.unique_templates = pool.unique_template_count();
    if (s.total > 0) {
        s.avg_nodes = static_cast<double>(nodes) / static_cast<double>(s.total);
        s.avg_edges = static_cast<double>(edges) / static_cast<double>(s.total);
    }
    return s;
}

void write_records(const std::vector<NLGQLRecord>& records, std::ostream& out) {
    for (const auto& r : records) out << to_json(r).dump() << '\n';
}

void write_records(const std::vector<NLGQLRecord>& records, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    write_records(records, out);
}

std::vector<NLGQLRecord> read_records(std::istream& in) {
    std::vector<NLGQLRecord> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            out.push_back(record_from_json(nlohmann::json::parse(line)));
        } catch (const nlohmann::json::exception& ex) {
            throw DataError(lineno, ex.what());
        } catch (const FormatError& ex) {
            throw DataError(lineno, ex.what());
        }
    }
    return out;
}

std::vector<NLGQLRecord> read_records(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path.string());
    try {
        return read_records(in);
    } catch (const DataError& ex) {
        throw DataError(path.string() + ": " + ex.what());
    }
}

DataPool pool_from_records(std::vector<NLGQLRecord> records) {
    DataPool pool;
    for (auto& r : records) pool.append(std::move(r));
    return pool;
}

} // namespace nl2gql
