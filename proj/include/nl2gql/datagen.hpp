#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "nl2gql/prompt.hpp"
#include "nl2gql/templates.hpp"

namespace nl2gql {

struct GenerationConfig {
    std::size_t k_demonstrations = 8;
    double similarity_threshold = 0.8;
    std::size_t target_count = 0;
    std::map<int, std::size_t> quotas;  // empty: target split evenly, remainder to low ids; else must sum to target_count
    std::uint64_t rng_seed = 0;
    std::size_t max_iterations = 0;     // 0: 20 * target_count + 100
    std::size_t jobs = 1;               // candidates in flight per batch

    // Throws ConfigError when an invariant does not hold.
    void validate() const;
    std::map<int, std::size_t> effective_quotas() const;
    std::size_t effective_max_iterations() const;
};

class LlmClient {
public:
    virtual ~LlmClient() = default;
    // Must be safe to call concurrently.
    virtual std::string complete(const PromptSpec& prompt) = 0;
};

class SimilarityScorer {
public:
    virtual ~SimilarityScorer() = default;
    // Symmetric, in [0, 1], score(a, a) == 1.
    virtual double score(std::string_view a, std::string_view b) const = 0;
};

// Cosine similarity of character-trigram count vectors. Code points are
// ASCII-lowercased; a string shorter than three code points is one gram.
class TrigramCosineScorer : public SimilarityScorer {
public:
    double score(std::string_view a, std::string_view b) const override;
};

// --- rule-based GQL description ---

// One sentence per clause, e.g. "RETURN s.stock.code returns the code of the stock."
std::string explain_clause(const gql::Query& query, std::size_t clause_index);

// NL question for a template GQL: the matching canonical type's NL template
// with its slots filled from the query, or the joined clause explanations
// when no type matches. Placeholders in the query carry over unchanged.
std::string compose_nl(const gql::Query& query);

// Canonical type id whose shape the query has, 0 when none.
int classify_query_type(const gql::Query& query);

// --- step 1 ---

struct GenPrompt {
    PromptSpec prompt;
    std::vector<TemplatePair> demonstrations;
};

std::string generation_task_description(int query_type_id);

GenPrompt build_gen_prompt(const GraphSchema& schema, const DataPool& pool, int query_type_id,
                           const GenerationConfig& cfg, std::uint64_t seed);

using GenOutcome = std::variant<TemplatePair, Rejection>;

// Response must contain a line "NL: ..." and a line "GQL: ...".
GenOutcome parse_gen_response(std::string_view response, const GraphSchema& schema, int query_type_id);
GenOutcome nl_gql_gen(LlmClient& client, const GenPrompt& prompt, const GraphSchema& schema,
                      int query_type_id);

// --- step 2 ---

PromptSpec build_cot_prompt(const GraphSchema& schema, const std::vector<TemplatePair>& examples,
                            std::string_view gql_template);

using NlOutcome = std::variant<std::string, Rejection>;

// Last double-quoted span of the response.
NlOutcome extract_final_nl(std::string_view response);
NlOutcome gql2nl_gen(LlmClient& client, const PromptSpec& prompt);

bool consistency_gate(const SimilarityScorer& scorer, std::string_view q1, std::string_view q2,
                      const GenerationConfig& cfg);

// --- loop ---

struct RejectionRecord {
    std::string stage;
    std::string reason;
    std::string candidate;
};

nlohmann::ordered_json to_json(const RejectionRecord& r);

// A candidate that passed both LLM steps, before the gate.
struct Candidate {
    int query_type_id = 0;
    TemplatePair pair;         // Q', L'
    std::string back_translation;  // Q''
    double similarity = 0.0;
};

struct GenerationResult {
    DataPool pool;
    std::vector<RejectionRecord> rejections;
    std::map<std::string, std::size_t> rejection_histogram;
    std::vector<Candidate> candidates;  // every candidate that reached the gate, in order
    std::size_t iterations = 0;
    bool budget_exhausted = false;
};

GenerationResult self_instruct_loop(const GraphSchema& schema, const PropertyGraph& graph, DataPool pool,
                                    LlmClient& client, const SimilarityScorer& scorer,
                                    const GenerationConfig& cfg);

// --- split ---

struct SplitRatios {
    double train = 7;
    double dev = 1;
    double test = 2;
};

struct Splits {
    std::vector<NLGQLRecord> train;
    std::vector<NLGQLRecord> dev;
    std::vector<NLGQLRecord> test;
};

// Stratified by query_type_id; each part keeps pool order.
Splits split_pool(const std::vector<NLGQLRecord>& records, SplitRatios ratios, std::uint64_t seed);

// --- clients ---

struct MockLlmOptions {
    std::uint64_t seed = 0;
    double corruption_rate = 0.1;
    // NL -> gold GQL, consulted by the NL2GQL inference mode.
    using AnswerBook = std::map<std::string, std::string, std::less<>>;
    AnswerBook answer_book;
};

// Offline stand-in. Output depends only on the rendered prompt, the seed
// and the schema it was built with. Mode is chosen from the payload header:
// [NL-GQL] generation, [CoT-based GQL2NL] back-translation, [NL] inference.
class MockLlm : public LlmClient {
public:
    MockLlm(GraphSchema schema, MockLlmOptions options);
    std::string complete(const PromptSpec& prompt) override;

private:
    GraphSchema schema_;
    MockLlmOptions options_;

    std::string generate(std::string_view payload, std::uint64_t h) const;
    std::string back_translate(std::string_view payload) const;
    std::string infer(std::string_view payload, std::uint64_t h) const;
};

struct HttpLlmOptions {
    std::string base_url;         // e.g. http://localhost:8000/v1
    std::string model;
    std::string api_key_env;      // name of the environment variable holding the key; may be empty
    double timeout_seconds = 60;
    int retries = 2;
};

// OpenAI-compatible chat completions endpoint.
class HttpLlmClient : public LlmClient {
public:
    explicit HttpLlmClient(HttpLlmOptions options);
    std::string complete(const PromptSpec& prompt) override;

private:
    HttpLlmOptions options_;
    std::string origin_;
    std::string path_;
    std::string api_key_;
};

} // namespace nl2gql
