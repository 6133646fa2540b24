#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "nl2gql/schema_linker.hpp"

namespace nl2gql {

inline constexpr double kExTolerance = 1e-6;

inline constexpr std::string_view kEmNormalization =
    "clause multiset after alias renaming to a0, a1, ... in first-occurrence order, canonical literal printing, "
    "single spacing, uppercase keywords and lexicographically ordered operands of = and <>";

// 1 iff both parse and their canonical clause multisets are equal. An
// unparseable gold throws DataError; an unparseable pred scores 0.
int em_score(std::string_view pred, std::string_view gold);

// Cells compare with an absolute tolerance on numbers; null equals null.
// Rows compare in order when gold is ordered, as multisets otherwise.
// Column names are ignored.
bool tables_match(const ResultTable& pred, const ResultTable& gold);

// 1 iff pred executes and its table matches gold's. Throws DataError when
// gold does not execute.
int ex_score(const PropertyGraph& graph, std::string_view pred, std::string_view gold);

struct StageLatency {
    double link = 0;
    double prompt = 0;
    double llm = 0;
    double execute = 0;
};

struct Prediction {
    std::size_t id = 0;
    std::string pred_gql;
    StageLatency latency;
    std::string error_stage;  // empty when the system produced a query
    std::string error;
};

nlohmann::ordered_json to_json(const Prediction& p);
Prediction prediction_from_json(const nlohmann::json& j);
void write_predictions(const std::vector<Prediction>& preds, const std::filesystem::path& path);
std::vector<Prediction> read_predictions(const std::filesystem::path& path);

struct TypeScore {
    std::size_t count = 0;
    double em = 0;
    double ex = 0;
};

struct Failure {
    std::size_t id = 0;
    std::string stage;
    std::string reason;
};

struct EvalReport {
    std::string variant;
    std::uint64_t seed = 0;
    std::string dataset_hash;
    std::size_t total = 0;
    double em = 0;
    double ex = 0;
    std::map<int, TypeScore> per_type;  // ids 1..8 always present
    StageLatency avg_latency;           // mean over records, first record excluded as warmup
    std::vector<Failure> failures;
};

nlohmann::ordered_json to_json(const EvalReport& report);
// One row per query type plus a total row, tab separated.
std::string report_table(const EvalReport& report);
std::string dataset_hash(const std::vector<NLGQLRecord>& records);

// Scores predictions[i] against dataset[predictions[i].id].
EvalReport evaluate_predictions(const PropertyGraph& graph, const std::vector<NLGQLRecord>& dataset,
                                const std::vector<Prediction>& predictions, std::string variant, std::uint64_t seed);

using NlToGqlSystem = std::function<Prediction(std::size_t id, const NLGQLRecord& record)>;

struct RunResult {
    std::vector<Prediction> predictions;
    EvalReport report;
};

// Runs the system on each record (up to `jobs` at a time) and scores it.
RunResult evaluate_run(const PropertyGraph& graph, const std::vector<NLGQLRecord>& dataset,
                       const NlToGqlSystem& system, std::string variant, std::uint64_t seed, std::size_t jobs = 1);

// link -> prompt -> LLM -> MATCH verification.
class InferencePipeline {
public:
    InferencePipeline(const GraphSchema& schema, const PropertyGraph& graph, std::vector<NLGQLRecord> pool,
                      LlmClient& client, const SimilarityScorer& scorer, PromptVariant variant);

    struct Trace {
        LinkResult link;
        PromptSpec prompt;
        std::string response;
        bool match_rewritten = false;
    };

    Prediction predict(std::size_t id, std::string_view question, Trace* trace = nullptr) const;
    NlToGqlSystem as_system() const;

private:
    const GraphSchema& schema_;
    LabelDictionary dict_;
    std::vector<NLGQLRecord> pool_;
    LlmClient& client_;
    const SimilarityScorer& scorer_;
    PromptVariant variant_;
};

// GQL text from a model response: the text after a "GQL:" marker or inside
// a code fence when present, else the whole response, trimmed.
std::string extract_gql(std::string_view response);

} // namespace nl2gql
