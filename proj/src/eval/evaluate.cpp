#include <chrono>
#include <cstdio>
#include <fstream>
#include <future>

#include <nlohmann/json.hpp>

#include "nl2gql/error.hpp"
#include "nl2gql/eval.hpp"
#include "nl2gql/rng.hpp"

namespace nl2gql {

nlohmann::ordered_json to_json(const Prediction& p) {
    nlohmann::ordered_json j;
    j["id"] = p.id;
    j["pred_gql"] = p.pred_gql;
    j["latency_seconds"] = {{"link", p.latency.link}, {"prompt", p.latency.prompt}, {"llm", p.latency.llm}};
    if (!p.error_stage.empty()) {
        j["error_stage"] = p.error_stage;
        j["error"] = p.error;
    }
    return j;
}

Prediction prediction_from_json(const nlohmann::json& j) {
    Prediction p;
    try {
        p.id = j.at("id").get<std::size_t>();
        p.pred_gql = j.at("pred_gql").get<std::string>();
        if (j.contains("latency_seconds")) {
            const auto& l = j.at("latency_seconds");
            p.latency.link = l.value("link", 0.0);
            p.latency.prompt = l.value("prompt", 0.0);
            p.latency.llm = l.value("llm", 0.0);
        }
        p.error_stage = j.value("error_stage", "");
        p.error = j.value("error", "");
    } catch (const nlohmann::json::exception& ex) {
        throw FormatError(std::string("malformed prediction: ") + ex.what());
    }
    return p;
}

void write_predictions(const std::vector<Prediction>& preds, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    for (const auto& p : preds) out << to_json(p).dump() << '\n';
}

std::vector<Prediction> read_predictions(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path.string());
    std::vector<Prediction> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            out.push_back(prediction_from_json(nlohmann::json::parse(line)));
        } catch (const nlohmann::json::exception& ex) {
            throw DataError(lineno, path.string() + ": " + ex.what());
        } catch (const FormatError& ex) {
            throw DataError(lineno, path.string() + ": " + ex.what());
        }
    }
    return out;
}

std::string dataset_hash(const std::vector<NLGQLRecord>& records) {
    std::uint64_t h = fnv1a("");
    for (const auto& r : records) h = mix_seed(h, fnv1a(to_json(r).dump()));
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

nlohmann::ordered_json to_json(const EvalReport& r) {
    nlohmann::ordered_json j;
    j["metadata"] = {{"variant", r.variant},
                     {"seed", r.seed},
                     {"dataset_hash", r.dataset_hash},
                     {"em_normalization", std::string(kEmNormalization)},
                     {"ex_tolerance", kExTolerance}};
    j["total"] = r.total;
    j["em"] = r.em;
    j["ex"] = r.ex;
    nlohmann::ordered_json per_type = nlohmann::ordered_json::object();
    for (const auto& [t, s] : r.per_type) {
        per_type[std::to_string(t)] = {{"count", s.count}, {"em", s.em}, {"ex", s.ex}};
    }
    j["per_type"] = per_type;
    j["avg_latency_seconds"] = {{"link", r.avg_latency.link},
                                {"prompt", r.avg_latency.prompt},
                                {"llm", r.avg_latency.llm},
                                {"execute", r.avg_latency.execute}};
    auto failures = nlohmann::ordered_json::array();
    for (const auto& f : r.failures) failures.push_back({{"id", f.id}, {"stage", f.stage}, {"reason", f.reason}});
    j["failures"] = failures;
    return j;
}

std::string report_table(const EvalReport& r) {
    std::string out = "query_type_id\tcount\tem\tex\n";
    char buf[128];
    for (const auto& [t, s] : r.per_type) {
        std::snprintf(buf, sizeof buf, "%d\t%zu\t%.4f\t%.4f\n", t, s.count, s.em, s.ex);
        out += buf;
    }
    std::snprintf(buf, sizeof buf, "total\t%zu\t%.4f\t%.4f\n", r.total, r.em, r.ex);
    return out + buf;
}

EvalReport evaluate_predictions(const PropertyGraph& graph, const std::vector<NLGQLRecord>& dataset,
                                const std::vector<Prediction>& predictions, std::string variant, std::uint64_t seed) {
    EvalReport report;
    report.variant = std::move(variant);
    report.seed = seed;
    report.dataset_hash = dataset_hash(dataset);
    for (int t = 1; t <= kQueryTypeCount; ++t) report.per_type[t] = {};

    std::map<int, std::pair<std::size_t, std::size_t>> hits;  // type -> (em, ex)
    std::size_t em_total = 0;
    std::size_t ex_total = 0;
    StageLatency sum;
    std::size_t timed = 0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const Prediction& p = predictions[i];
        if (p.id >= dataset.size()) throw DataError("prediction id " + std::to_string(p.id) + " is out of range");
        const NLGQLRecord& gold = dataset[p.id];

        const int em = em_score(p.pred_gql, gold.gql);
        const auto start = std::chrono::steady_clock::now();
        Verified pv = execute_verified(graph, p.pred_gql);
        const double exec_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        int ex = 0;
        if (auto* rej = std::get_if<Rejection>(&pv)) {
            report.failures.push_back({p.id, p.error_stage.empty() ? rej->stage : p.error_stage,
                                       p.error_stage.empty() ? rej->reason : p.error});
        } else {
            Verified gv = execute_verified(graph, gold.gql);
            if (auto* grej = std::get_if<Rejection>(&gv)) throw DataError("gold query does not execute: " + grej->reason);
            ex = tables_match(std::get<ResultTable>(pv), std::get<ResultTable>(gv)) ? 1 : 0;
        }

        auto& ts = report.per_type[gold.query_type_id];
        ++ts.count;
        hits[gold.query_type_id].first += static_cast<std::size_t>(em);
        hits[gold.query_type_id].second += static_cast<std::size_t>(ex);
        em_total += static_cast<std::size_t>(em);
        ex_total += static_cast<std::size_t>(ex);

        if (i == 0 && predictions.size() > 1) continue;  // warmup
        sum.link += p.latency.link;
        sum.prompt += p.latency.prompt;
        sum.llm += p.latency.llm;
        sum.execute += exec_seconds;
        ++timed;
    }
    report.total = predictions.size();
    if (report.total > 0) {
        report.em = static_cast<double>(em_total) / static_cast<double>(report.total);
        report.ex = static_cast<double>(ex_total) / static_cast<double>(report.total);
    }
    for (auto& [t, s] : report.per_type) {
        if (s.count == 0) continue;
        s.em = static_cast<double>(hits[t].first) / static_cast<double>(s.count);
        s.ex = static_cast<double>(hits[t].second) / static_cast<double>(s.count);
    }
    if (timed > 0) {
        const double n = static_cast<double>(timed);
        report.avg_latency = {sum.link / n, sum.prompt / n, sum.llm / n, sum.execute / n};
    }
    return report;
}

RunResult evaluate_run(const PropertyGraph& graph, const std::vector<NLGQLRecord>& dataset,
                       const NlToGqlSystem& system, std::string variant, std::uint64_t seed, std::size_t jobs) {
    RunResult out;
    out.predictions.resize(dataset.size());
    jobs = std::max<std::size_t>(1, jobs);
    for (std::size_t begin = 0; begin < dataset.size(); begin += jobs) {
        const std::size_t end = std::min(dataset.size(), begin + jobs);
        if (jobs == 1) {
            out.predictions[begin] = system(begin, dataset[begin]);
            continue;
        }
        std::vector<std::future<Prediction>> futures;
        for (std::size_t i = begin; i < end; ++i) {
            futures.push_back(std::async(std::launch::async, [&, i] { return system(i, dataset[i]); }));
        }
        for (std::size_t i = begin; i < end; ++i) out.predictions[i] = futures[i - begin].get();
    }
    out.report = evaluate_predictions(graph, dataset, out.predictions, std::move(variant), seed);
    return out;
}

} // namespace nl2gql
