#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "nl2gql/datagen.hpp"
#include "nl2gql/eval.hpp"

namespace nl2gql {

struct LlmSettings {
    bool mock = false;
    double mock_corruption_rate = 0.1;
    std::string base_url;
    std::string model;
    std::string api_key_env;  // the key itself never appears in a config file
    double timeout_seconds = 60;
    int retries = 2;
};

struct RunConfig {
    std::filesystem::path schema;
    std::filesystem::path nodes;
    std::filesystem::path edges;
    std::filesystem::path pool;         // cmd_gen output, jsonl
    std::filesystem::path rejections;   // cmd_gen rejection log, jsonl; empty: not written
    std::filesystem::path splits;       // directory holding train/dev/test.jsonl
    std::filesystem::path predictions;  // cmd_infer output, jsonl
    std::filesystem::path report;       // cmd_eval output, json; a .tsv table is written beside it
    std::filesystem::path prompt_dump;  // directory for emitted inference prompts; empty: none
    GenerationConfig generation;
    SplitRatios split_ratios;
    PromptVariant variant = PromptVariant::Relevant;
    LlmSettings llm;
    std::uint64_t rng_seed = 0;
    std::size_t jobs = 1;

    // Throws ConfigError unless exactly one of endpoint and mock is active.
    void require_llm() const;
};

// Relative paths resolve against `base_dir`. Throws ConfigError.
RunConfig config_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir);
RunConfig load_run_config(const std::filesystem::path& path);

struct ConfigOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::string> variant;
    bool mock = false;
    std::optional<std::size_t> jobs;
    std::optional<std::size_t> target_count;
};

// A --seed override drives both generation and the global seed.
void apply_overrides(RunConfig& cfg, const ConfigOverrides& o);

std::unique_ptr<LlmClient> make_llm_client(const RunConfig& cfg, const GraphSchema& schema,
                                           MockLlmOptions::AnswerBook answer_book = {});

// Each command writes its artifacts, prints a summary to `out` and progress
// to `err`. Errors propagate as exceptions.
LoadSummary cmd_load(const RunConfig& cfg, std::ostream& out, std::ostream& err);
GenerationResult cmd_gen(const RunConfig& cfg, std::ostream& out, std::ostream& err);
Splits cmd_split(const RunConfig& cfg, std::ostream& out, std::ostream& err);
LinkResult cmd_link(const RunConfig& cfg, std::string_view question, std::ostream& out, std::ostream& err);
std::vector<Prediction> cmd_infer(const RunConfig& cfg, std::string_view split, std::ostream& out,
                                  std::ostream& err);
EvalReport cmd_eval(const RunConfig& cfg, const std::filesystem::path& predictions, std::string_view split,
                    std::ostream& out, std::ostream& err);

nlohmann::ordered_json to_json(const LinkResult& link);
std::filesystem::path split_path(const RunConfig& cfg, std::string_view split);

// Entry point for the nl2gql binary. Returns the process exit status.
int run_cli(int argc, char** argv);

} // namespace nl2gql
