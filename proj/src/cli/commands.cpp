#include <fstream>
#include <future>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "nl2gql/cli.hpp"
#include "nl2gql/error.hpp"

namespace nl2gql {

namespace {

void require_path(const std::filesystem::path& p, const char* key, bool must_exist = true) {
    if (p.empty()) throw ConfigError(std::string("paths.") + key + " is not set");
    if (must_exist && !std::filesystem::exists(p)) {
        throw ConfigError(std::string("paths.") + key + " does not exist: " + p.string());
    }
}

void ensure_parent(const std::filesystem::path& p) {
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
}

struct Loaded {
    GraphSchema schema;
    PropertyGraph graph;
};

Loaded load_inputs(const RunConfig& cfg) {
    require_path(cfg.schema, "schema");
    require_path(cfg.nodes, "nodes");
    require_path(cfg.edges, "edges");
    GraphSchema schema = load_schema(cfg.schema);
    PropertyGraph graph = load_graph(schema, cfg.nodes, cfg.edges);
    return {std::move(schema), std::move(graph)};
}

void check_split_name(std::string_view split) {
    if (split != "train" && split != "dev" && split != "test") {
        throw ConfigError("unknown split '" + std::string(split) + "'; expected train, dev or test");
    }
}

// Records used for label disambiguation: the train split when present, else the pool.
std::vector<NLGQLRecord> linking_pool(const RunConfig& cfg) {
    if (!cfg.splits.empty() && std::filesystem::exists(split_path(cfg, "train"))) {
        return read_records(split_path(cfg, "train"));
    }
    if (!cfg.pool.empty() && std::filesystem::exists(cfg.pool)) return read_records(cfg.pool);
    return {};
}

} // namespace

std::filesystem::path split_path(const RunConfig& cfg, std::string_view split) {
    return cfg.splits / (std::string(split) + ".jsonl");
}

std::unique_ptr<LlmClient> make_llm_client(const RunConfig& cfg, const GraphSchema& schema,
                                           MockLlmOptions::AnswerBook answer_book) {
    cfg.require_llm();
    if (cfg.llm.mock) {
        MockLlmOptions o;
        o.seed = cfg.rng_seed;
        o.corruption_rate = cfg.llm.mock_corruption_rate;
        o.answer_book = std::move(answer_book);
        return std::make_unique<MockLlm>(schema, std::move(o));
    }
    HttpLlmOptions o;
    o.base_url = cfg.llm.base_url;
    o.model = cfg.llm.model;
    o.api_key_env = cfg.llm.api_key_env;
    o.timeout_seconds = cfg.llm.timeout_seconds;
    o.retries = cfg.llm.retries;
    return std::make_unique<HttpLlmClient>(std::move(o));
}

nlohmann::ordered_json to_json(const LinkResult& link) {
    nlohmann::ordered_json j;
    auto mentions = nlohmann::ordered_json::array();
    for (const auto& m : link.mentions) {
        mentions.push_back({{"text", m.text},
                            {"begin", m.begin},
                            {"end", m.end},
                            {"candidate_tags", m.candidate_tags},
                            {"resolved_tags", m.resolved_tags},
                            {"is_tag_word", m.is_tag_word}});
    }
    j["mentions"] = mentions;
    j["resolved_labels"] = link.resolved_labels;
    j["join_path"] = {{"elements", link.join_path.elements}, {"is_chain", link.join_path.is_chain}};
    j["fell_back_to_full"] = link.fell_back_to_full;
    j["relevant_schema"] = schema_to_json(link.relevant_schema);
    return j;
}

LoadSummary cmd_load(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    Loaded in = load_inputs(cfg);
    LoadSummary s = summarize(in.graph);
    err << "loaded " << s.node_count << " nodes and " << s.edge_count << " edges\n";
    nlohmann::ordered_json j;
    j["node_count"] = s.node_count;
    j["edge_count"] = s.edge_count;
    j["nodes_per_tag"] = s.nodes_per_tag;
    j["edges_per_type"] = s.edges_per_type;
    out << j.dump(2) << '\n';
    return s;
}

GenerationResult cmd_gen(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    require_path(cfg.pool, "pool", false);
    Loaded in = load_inputs(cfg);
    auto client = make_llm_client(cfg, in.schema);
    TrigramCosineScorer scorer;
    GenerationConfig gc = cfg.generation;
    gc.validate();
    err << "generating " << gc.target_count << " records (seed " << gc.rng_seed << ", jobs " << gc.jobs << ")\n";
    GenerationResult r = self_instruct_loop(in.schema, in.graph, DataPool{}, *client, scorer, gc);

    ensure_parent(cfg.pool);
    write_records(r.pool.records(), cfg.pool);
    if (!cfg.rejections.empty()) {
        ensure_parent(cfg.rejections);
        std::ofstream log(cfg.rejections, std::ios::binary);
        if (!log) throw Error("cannot write " + cfg.rejections.string());
        for (const auto& rej : r.rejections) log << to_json(rej).dump() << '\n';
    }

    err << "accepted " << r.pool.size() << " of " << r.iterations << " candidates";
    if (r.budget_exhausted) err << " (iteration budget exhausted)";
    err << '\n';
    for (const auto& [stage, n] : r.rejection_histogram) err << "  rejected at " << stage << ": " << n << '\n';

    PoolStats st = pool_stats(r.pool);
    nlohmann::ordered_json j;
    j["pool"] = cfg.pool.string();
    j["total"] = st.total;
    nlohmann::ordered_json per_type = nlohmann::ordered_json::object();
    for (const auto& [t, n] : st.per_type) per_type[std::to_string(t)] = n;
    j["per_type"] = per_type;
    j["unique_templates"] = st.unique_templates;
    j["avg_nodes"] = st.avg_nodes;
    j["avg_edges"] = st.avg_edges;
    j["iterations"] = r.iterations;
    j["rejections"] = r.rejection_histogram;
    out << j.dump(2) << '\n';
    return r;
}

Splits cmd_split(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    require_path(cfg.pool, "pool");
    if (cfg.splits.empty()) throw ConfigError("paths.splits is not set");
    std::vector<NLGQLRecord> records = read_records(cfg.pool);
    Splits s = split_pool(records, cfg.split_ratios, cfg.rng_seed);
    std::filesystem::create_directories(cfg.splits);
    write_records(s.train, split_path(cfg, "train"));
    write_records(s.dev, split_path(cfg, "dev"));
    write_records(s.test, split_path(cfg, "test"));
    err << "split " << records.size() << " records into " << s.train.size() << '/' << s.dev.size() << '/'
        << s.test.size() << '\n';
    out << nlohmann::ordered_json{{"train", s.train.size()}, {"dev", s.dev.size()}, {"test", s.test.size()}}.dump(2)
        << '\n';
    return s;
}

LinkResult cmd_link(const RunConfig& cfg, std::string_view question, std::ostream& out, std::ostream& err) {
    Loaded in = load_inputs(cfg);
    std::vector<NLGQLRecord> pool = linking_pool(cfg);
    TrigramCosineScorer scorer;
    LabelDictionary dict = build_dictionary(in.schema, in.graph);
    LinkResult r = link(question, dict, in.schema, pool, scorer);
    err << "linked " << r.resolved_labels.size() << " labels\n";
    nlohmann::ordered_json j = to_json(r);
    j["prompt"] = assemble_prompt(r, in.schema, question, cfg.variant).render();
    out << j.dump(2) << '\n';
    return r;
}

std::vector<Prediction> cmd_infer(const RunConfig& cfg, std::string_view split, std::ostream& out,
                                  std::ostream& err) {
    check_split_name(split);
    cfg.require_llm();
    require_path(cfg.predictions, "predictions", false);
    Loaded in = load_inputs(cfg);
    require_path(split_path(cfg, split), "splits");
    std::vector<NLGQLRecord> dataset = read_records(split_path(cfg, split));

    MockLlmOptions::AnswerBook book;
    if (cfg.llm.mock) {
        for (const auto& r : dataset) book.emplace(r.nl, r.gql);
    }
    auto client = make_llm_client(cfg, in.schema, std::move(book));
    TrigramCosineScorer scorer;
    InferencePipeline pipeline(in.schema, in.graph, linking_pool(cfg), *client, scorer, cfg.variant);

    std::vector<Prediction> preds(dataset.size());
    std::vector<std::string> prompts(dataset.size());
    const std::size_t jobs = std::max<std::size_t>(1, cfg.jobs);
    auto run_one = [&](std::size_t i) {
        InferencePipeline::Trace trace;
        preds[i] = pipeline.predict(i, dataset[i].nl, &trace);
        prompts[i] = trace.prompt.render();
    };
    for (std::size_t begin = 0; begin < dataset.size(); begin += jobs) {
        const std::size_t end = std::min(dataset.size(), begin + jobs);
        std::vector<std::future<void>> futures;
        for (std::size_t i = begin; i < end; ++i) futures.push_back(std::async(std::launch::async, run_one, i));
        for (auto& f : futures) f.get();
        err << "inferred " << end << '/' << dataset.size() << '\r';
    }
    if (!dataset.empty()) err << '\n';

    ensure_parent(cfg.predictions);
    write_predictions(preds, cfg.predictions);
    if (!cfg.prompt_dump.empty()) {
        const std::filesystem::path dir = cfg.prompt_dump / std::string(split);
        std::filesystem::create_directories(dir);
        for (std::size_t i = 0; i < prompts.size(); ++i) {
            std::ofstream f(dir / (std::to_string(i) + ".txt"), std::ios::binary);
            f << prompts[i];
        }
    }
    std::size_t errors = 0;
    for (const auto& p : preds) errors += p.error_stage.empty() ? 0 : 1;
    err << "wrote " << preds.size() << " predictions (" << errors << " with errors)\n";
    out << nlohmann::ordered_json{{"predictions", cfg.predictions.string()}, {"count", preds.size()},
                                  {"errors", errors}}.dump(2)
        << '\n';
    return preds;
}

EvalReport cmd_eval(const RunConfig& cfg, const std::filesystem::path& predictions, std::string_view split,
                    std::ostream& out, std::ostream& err) {
    check_split_name(split);
    require_path(cfg.report, "report", false);
    if (predictions.empty() || !std::filesystem::exists(predictions)) {
        throw ConfigError("predictions file does not exist: " + predictions.string());
    }
    Loaded in = load_inputs(cfg);
    require_path(split_path(cfg, split), "splits");
    std::vector<NLGQLRecord> dataset = read_records(split_path(cfg, split));
    std::vector<Prediction> preds = read_predictions(predictions);
    EvalReport report = evaluate_predictions(in.graph, dataset, preds, std::string(to_string(cfg.variant)),
                                             cfg.rng_seed);
    ensure_parent(cfg.report);
    {
        std::ofstream f(cfg.report, std::ios::binary);
        if (!f) throw Error("cannot write " + cfg.report.string());
        f << to_json(report).dump(2) << '\n';
    }
    std::filesystem::path table = cfg.report;
    table.replace_extension(".tsv");
    {
        std::ofstream f(table, std::ios::binary);
        if (!f) throw Error("cannot write " + table.string());
        f << report_table(report);
    }
    err << "evaluated " << report.total << " predictions, " << report.failures.size() << " failed to execute\n";
    out << report_table(report);
    return report;
}

int run_cli(int argc, char** argv) {
    CLI::App app{"Natural language to graph query toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    ConfigOverrides o;
    std::uint64_t seed = 0;
    std::string variant;
    std::size_t jobs = 1;
    std::size_t target = 0;
    app.add_option("--config", config_path, "Run configuration (JSON)")->required()->check(CLI::ExistingFile);
    auto* seed_opt = app.add_option("--seed", seed, "Global RNG seed");
    auto* variant_opt = app.add_option("--variant", variant, "Prompt variant")
                            ->check(CLI::IsMember({"relevant", "relevant-zh", "full", "full-zh", "none"}));
    app.add_flag("--mock", o.mock, "Use the deterministic offline LLM");
    auto* jobs_opt = app.add_option("--jobs", jobs, "Worker count")->check(CLI::PositiveNumber);
    auto* target_opt = app.add_option("--target-count", target, "Records to generate");

    auto* load = app.add_subcommand("load", "Load the graph and print a summary");
    auto* gen = app.add_subcommand("gen", "Generate the NL-GQL pool");
    auto* split = app.add_subcommand("split", "Split the pool into train/dev/test");
    auto* link_cmd = app.add_subcommand("link", "Link a question to schema labels");
    std::string question;
    link_cmd->add_option("question", question, "Natural language question")->required();
    auto* infer = app.add_subcommand("infer", "Predict GQL for a split");
    std::string infer_split = "test";
    infer->add_option("--split", infer_split, "Split to predict")->check(CLI::IsMember({"train", "dev", "test"}));
    auto* eval = app.add_subcommand("eval", "Score predictions against a split");
    std::string eval_split = "test";
    std::string predictions;
    eval->add_option("--split", eval_split, "Gold split")->check(CLI::IsMember({"train", "dev", "test"}));
    eval->add_option("--predictions", predictions, "Predictions file (default: paths.predictions)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }
    if (*seed_opt) o.seed = seed;
    if (*variant_opt) o.variant = variant;
    if (*jobs_opt) o.jobs = jobs;
    if (*target_opt) o.target_count = target;

    try {
        RunConfig cfg = load_run_config(config_path);
        apply_overrides(cfg, o);
        if (*load) cmd_load(cfg, std::cout, std::cerr);
        else if (*gen) cmd_gen(cfg, std::cout, std::cerr);
        else if (*split) cmd_split(cfg, std::cout, std::cerr);
        else if (*link_cmd) cmd_link(cfg, question, std::cout, std::cerr);
        else if (*infer) cmd_infer(cfg, infer_split, std::cout, std::cerr);
        else if (*eval) {
            cmd_eval(cfg, predictions.empty() ? cfg.predictions : std::filesystem::path(predictions), eval_split,
                     std::cout, std::cerr);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

} // namespace nl2gql
