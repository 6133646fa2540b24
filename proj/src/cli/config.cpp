#include <fstream>

#include <nlohmann/json.hpp>

#include "nl2gql/cli.hpp"
#include "nl2gql/error.hpp"

namespace nl2gql {

namespace {

std::filesystem::path resolve(const nlohmann::json& paths, const char* key, const std::filesystem::path& base) {
    if (!paths.contains(key) || paths.at(key).is_null()) return {};
    std::filesystem::path p = paths.at(key).get<std::string>();
    return p.is_relative() ? (base / p).lexically_normal() : p;
}

} // namespace

void RunConfig::require_llm() const {
    const bool endpoint = !llm.base_url.empty();
    if (endpoint && llm.mock) throw ConfigError("both an LLM endpoint and the mock are configured; pick one");
    if (!endpoint && !llm.mock) throw ConfigError("no LLM endpoint configured and the mock is off");
    if (endpoint && llm.model.empty()) throw ConfigError("llm.model is required with an endpoint");
}

RunConfig config_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir) {
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    if (doc.contains("llm") && doc.at("llm").contains("api_key")) {
        throw ConfigError("llm.api_key is not allowed in config files; set llm.api_key_env instead");
    }
    RunConfig cfg;
    try {
        const nlohmann::json paths = doc.value("paths", nlohmann::json::object());
        cfg.schema = resolve(paths, "schema", base_dir);
        cfg.nodes = resolve(paths, "nodes", base_dir);
        cfg.edges = resolve(paths, "edges", base_dir);
        cfg.pool = resolve(paths, "pool", base_dir);
        cfg.rejections = resolve(paths, "rejections", base_dir);
        cfg.splits = resolve(paths, "splits", base_dir);
        cfg.predictions = resolve(paths, "predictions", base_dir);
        cfg.report = resolve(paths, "report", base_dir);
        cfg.prompt_dump = resolve(paths, "prompt_dump", base_dir);

        cfg.rng_seed = doc.value("rng_seed", std::uint64_t{0});
        cfg.jobs = doc.value("jobs", std::size_t{1});
        if (doc.contains("variant")) cfg.variant = parse_prompt_variant(doc.at("variant").get<std::string>());

        const nlohmann::json gen = doc.value("generation", nlohmann::json::object());
        GenerationConfig& g = cfg.generation;
        g.k_demonstrations = gen.value("k_demonstrations", g.k_demonstrations);
        g.similarity_threshold = gen.value("similarity_threshold", g.similarity_threshold);
        g.target_count = gen.value("target_count", g.target_count);
        g.max_iterations = gen.value("max_iterations", g.max_iterations);
        g.rng_seed = gen.value("rng_seed", cfg.rng_seed);
        if (gen.contains("quotas")) {
            for (const auto& [k, v] : gen.at("quotas").items()) g.quotas[std::stoi(k)] = v.get<std::size_t>();
        }
        g.jobs = cfg.jobs;

        const nlohmann::json split = doc.value("split", nlohmann::json::object());
        cfg.split_ratios.train = split.value("train", cfg.split_ratios.train);
        cfg.split_ratios.dev = split.value("dev", cfg.split_ratios.dev);
        cfg.split_ratios.test = split.value("test", cfg.split_ratios.test);

        const nlohmann::json llm = doc.value("llm", nlohmann::json::object());
        cfg.llm.mock = llm.value("mock", false);
        cfg.llm.mock_corruption_rate = llm.value("mock_corruption_rate", cfg.llm.mock_corruption_rate);
        cfg.llm.base_url = llm.value("base_url", "");
        cfg.llm.model = llm.value("model", "");
        cfg.llm.api_key_env = llm.value("api_key_env", "");
        cfg.llm.timeout_seconds = llm.value("timeout_seconds", cfg.llm.timeout_seconds);
        cfg.llm.retries = llm.value("retries", cfg.llm.retries);
    } catch (const nlohmann::json::exception& ex) {
        throw ConfigError(std::string("invalid config: ") + ex.what());
    } catch (const std::invalid_argument& ex) {
        throw ConfigError(std::string("invalid config: ") + ex.what());
    }
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config " + path.string());
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& ex) {
        throw ConfigError(path.string() + ": " + ex.what());
    }
    return config_from_json(doc, path.parent_path());
}

void apply_overrides(RunConfig& cfg, const ConfigOverrides& o) {
    if (o.seed) {
        cfg.rng_seed = *o.seed;
        cfg.generation.rng_seed = *o.seed;
    }
    if (o.variant) cfg.variant = parse_prompt_variant(*o.variant);
    if (o.mock) {
        cfg.llm.mock = true;
        cfg.llm.base_url.clear();
    }
    if (o.jobs) {
        if (*o.jobs == 0) throw ConfigError("--jobs must be at least 1");
        cfg.jobs = *o.jobs;
        cfg.generation.jobs = *o.jobs;
    }
    if (o.target_count) cfg.generation.target_count = *o.target_count;
}

} // namespace nl2gql
