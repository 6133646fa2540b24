// One PASS/FAIL line per acceptance criterion. Exit status is nonzero when
// any criterion fails.
#include <unistd.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <set>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <queue>
#include <sstream>

#include <nlohmann/json.hpp>

#include "nl2gql/cli.hpp"
#include "nl2gql/error.hpp"
#include "oracle.hpp"

using namespace nl2gql;
using namespace nl2gql::testing;
namespace fs = std::filesystem;

namespace {

// Pinned thresholds.
constexpr std::size_t kOracleCases = 400;          // at least 200
constexpr std::size_t kOracleMaxNodes = 50;
constexpr double kOracleSeconds = 60.0;
constexpr std::size_t kFuzzQueries = 500;
constexpr std::size_t kSchemaGraphs = 100;
constexpr std::size_t kMaxSchemaTags = 12;
constexpr std::size_t kSplitN = 10000;
constexpr std::uint64_t kPipelineSeed = 42;
constexpr std::size_t kPipelineTarget = 200;
constexpr double kPipelineSeconds = 300.0;
constexpr double kAvgNodesLo = 1.0;
constexpr double kAvgNodesHi = 3.0;
constexpr double kThresholds[] = {0.5, 0.8, 0.95};

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << id << ": " << detail << std::endl;
    if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// --- shared pipeline run ---

struct PipelineRun {
    fs::path dir;
    GenerationResult gen;
    Splits splits;
    EvalReport report;
    double seconds = 0;
};

RunConfig pipeline_config(const fs::path& dir) {
    RunConfig cfg;
    cfg.schema = fixture_dir() + "/schema.json";
    cfg.nodes = fixture_dir() + "/nodes.jsonl";
    cfg.edges = fixture_dir() + "/edges.jsonl";
    cfg.pool = dir / "pool.jsonl";
    cfg.rejections = dir / "rejections.jsonl";
    cfg.splits = dir / "splits";
    cfg.predictions = dir / "predictions.jsonl";
    cfg.report = dir / "report.json";
    cfg.rng_seed = kPipelineSeed;
    cfg.generation.rng_seed = kPipelineSeed;
    cfg.generation.target_count = kPipelineTarget;
    cfg.llm.mock = true;
    return cfg;
}

PipelineRun run_pipeline(const fs::path& dir) {
    fs::remove_all(dir);
    fs::create_directories(dir);
    PipelineRun r;
    r.dir = dir;
    RunConfig cfg = pipeline_config(dir);
    std::ostringstream out;
    std::ostringstream err;
    const auto t0 = std::chrono::steady_clock::now();
    cmd_load(cfg, out, err);
    r.gen = cmd_gen(cfg, out, err);
    r.splits = cmd_split(cfg, out, err);
    cmd_infer(cfg, "test", out, err);
    r.report = cmd_eval(cfg, cfg.predictions, "test", out, err);
    r.seconds = seconds_since(t0);
    return r;
}

std::string strip_timing_lines(const std::string& jsonl) {
    std::istringstream in(jsonl);
    std::string line;
    std::string out;
    while (std::getline(in, line)) {
        auto j = nlohmann::ordered_json::parse(line);
        j.erase("latency_seconds");
        out += j.dump() + "\n";
    }
    return out;
}

std::string strip_report_timing(const std::string& text) {
    auto j = nlohmann::ordered_json::parse(text);
    j.erase("avg_latency_seconds");
    return j.dump();
}

// --- 1 ---

bool same_rows(const ResultTable& a, const ResultTable& b) { return a.rows == b.rows && a.ordered == b.ordered; }

void criterion_executor_oracle() {
    Rng rng(101);
    std::size_t cases = 0;
    std::size_t mismatches = 0;
    std::string first;
    const auto t0 = std::chrono::steady_clock::now();
    while (cases < kOracleCases) {
        GraphSchema schema = random_shape_schema(rng);
        PropertyGraph g = random_graph(rng, schema, kOracleMaxNodes);
        for (int k = 0; k < 8 && cases < kOracleCases; ++k) {
            const int type = 1 + static_cast<int>(cases % 8);
            auto c = random_shape_case(rng, g, type);
            if (!c) continue;
            ++cases;
            ResultTable expect = oracle_execute(g, *c);
            ResultTable got;
            try {
                got = execute(g, gql::parse(c->gql));
            } catch (const std::exception& ex) {
                ++mismatches;
                if (first.empty()) first = c->gql + " threw " + ex.what();
                continue;
            }
            if (!same_rows(expect, got)) {
                ++mismatches;
                if (first.empty()) first = c->gql;
            }
        }
    }
    const double secs = seconds_since(t0);
    std::ostringstream d;
    d << "executor vs brute-force oracle: " << cases << " cases, " << mismatches << " mismatches, " << secs << " s";
    if (!first.empty()) d << "; first mismatch: " << first;
    report(1, cases >= 200 && mismatches == 0 && secs < kOracleSeconds, d.str());
}

// --- 2 ---

std::string dummy_fill(const std::string& tmpl) {
    std::string out;
    for (std::size_t i = 0; i < tmpl.size(); ++i) {
        if (tmpl[i] != '[') {
            out += tmpl[i];
            continue;
        }
        const std::size_t close = tmpl.find(']', i);
        if (close == std::string::npos) {
            out += tmpl.substr(i);
            break;
        }
        const char before = i > 0 ? tmpl[i - 1] : ' ';
        if (before == '\'') out += "dummy";
        else if (before == '.') out += "prop";
        else if (before == '[' || before == '-') {
            out += tmpl.substr(i, close - i + 1);  // edge pattern bracket, keep
            i = close;
            continue;
        } else out += "1";
        i = close;
    }
    return out;
}

bool fixpoint(const std::string& text, std::string& why) {
    try {
        gql::Query a = gql::parse(text);
        const std::string pa = gql::print(a);
        gql::Query b = gql::parse(pa);
        if (!(a == b) || gql::print(b) != pa) {
            why = text + " -> " + pa;
            return false;
        }
        return true;
    } catch (const std::exception& ex) {
        why = text + ": " + ex.what();
        return false;
    }
}

void criterion_roundtrip() {
    std::vector<std::string> corpus;
    for (const auto& t : seed_templates()) corpus.push_back(dummy_fill(t.gql_template));
    corpus.push_back(
        "MATCH (t:trade{name:\"钢铁\"})<-[bt:belong_to]-(s:stock)-[hsd:has_stock_data]->(sd:stock_data) "
        "WHERE sd.stock_data.opening_price > 1 RETURN s.stock.name");
    Rng rng(202);
    for (std::size_t i = 0; i < kFuzzQueries; ++i) corpus.push_back(gql::print(random_query(rng)));
    std::size_t ok = 0;
    std::string first;
    for (const auto& q : corpus) {
        std::string why;
        if (fixpoint(q, why)) ++ok;
        else if (first.empty()) first = why;
    }
    std::ostringstream d;
    d << "parse/print/parse fixpoint on " << corpus.size() << " queries (8 templates, 1 example, " << kFuzzQueries
      << " fuzz): " << ok << "/" << corpus.size();
    if (!first.empty()) d << "; first failure: " << first;
    report(2, ok == corpus.size(), d.str());
}

// --- 3 ---

void criterion_grounding_replay(const PropertyGraph& g, const PipelineRun& run) {
    const auto& records = run.gen.pool.records();
    std::size_t ok = 0;
    for (const auto& r : records) {
        Verified v = execute_verified(g, r.gql);
        if (auto* t = std::get_if<ResultTable>(&v); t && *t == r.answer) ++ok;
    }
    std::ostringstream d;
    d << "pool replay: " << ok << "/" << records.size() << " records re-execute to their stored answer";
    report(3, !records.empty() && ok == records.size(), d.str());
}

// --- 4 ---

// Replaces every WHERE literal so that the predicate can no longer hold:
// numeric comparisons get a bound beyond any stored value, CONTAINS a needle
// absent from the graph. Applied only to records with a non-empty answer, so
// the corrupted query must return nothing.
std::optional<std::string> corrupt_where(const NLGQLRecord& r) {
    if (r.answer.rows.empty()) return std::nullopt;
    gql::Query q = gql::parse(r.gql);
    bool changed = false;
    std::function<void(gql::Expr&)> walk = [&](gql::Expr& e) {
        if (e.kind == gql::ExprKind::Contains && e.args[1].kind == gql::ExprKind::Literal) {
            e.args[1].literal = Value("\x01never-present\x01");
            changed = true;
            return;
        }
        if (e.kind == gql::ExprKind::Compare && e.args[1].kind == gql::ExprKind::Literal &&
            e.args[1].literal.is_numeric()) {
            switch (e.op) {
            case gql::CompareOp::Lt:
            case gql::CompareOp::Le: e.args[1].literal = Value(-1e300); break;
            case gql::CompareOp::Gt:
            case gql::CompareOp::Ge: e.args[1].literal = Value(1e300); break;
            default: return;
            }
            changed = true;
            return;
        }
        for (auto& a : e.args) walk(a);
    };
    for (auto& c : q.clauses) {
        if (auto* w = std::get_if<gql::WhereClause>(&c)) walk(w->predicate);
    }
    if (!changed) return std::nullopt;
    return gql::print(q);
}

std::string rename_aliases(const std::string& text) {
    gql::Query q = gql::parse(text);
    auto ren = [](std::string& a) {
        if (!a.empty()) a = "zz_" + a;
    };
    std::function<void(gql::Expr&)> walk = [&](gql::Expr& e) {
        if (e.kind == gql::ExprKind::Property || e.kind == gql::ExprKind::Variable) ren(e.name);
        for (auto& a : e.args) walk(a);
    };
    for (auto& c : q.clauses) {
        std::visit(
            [&](auto& cl) {
                using T = std::decay_t<decltype(cl)>;
                if constexpr (std::is_same_v<T, gql::MatchClause>) {
                    for (auto& n : cl.nodes) ren(n.alias);
                    for (auto& e : cl.edges) ren(e.alias);
                } else if constexpr (std::is_same_v<T, gql::WhereClause>) {
                    walk(cl.predicate);
                } else if constexpr (std::is_same_v<T, gql::WithClause> || std::is_same_v<T, gql::ReturnClause>) {
                    for (auto& it : cl.items) {
                        walk(it.expr);
                        ren(it.alias);
                    }
                } else if constexpr (std::is_same_v<T, gql::OrderByClause>) {
                    walk(cl.key);
                }
            },
            c);
    }
    return gql::print(q);
}

void criterion_metric_oracles(const PropertyGraph& g, const PipelineRun& run) {
    const auto& records = run.gen.pool.records();
    std::size_t self_ok = 0;
    std::size_t corrupted = 0;
    std::size_t corrupted_ex0 = 0;
    std::size_t renamed_ok = 0;
    for (const auto& r : records) {
        if (em_score(r.gql, r.gql) == 1 && ex_score(g, r.gql, r.gql) == 1) ++self_ok;
        if (auto bad = corrupt_where(r)) {
            ++corrupted;
            if (ex_score(g, *bad, r.gql) == 0) ++corrupted_ex0;
        }
        if (em_score(rename_aliases(r.gql), r.gql) == 1) ++renamed_ok;
    }
    std::ostringstream d;
    d << "self em=ex=1 on " << self_ok << "/" << records.size() << "; WHERE-constant corruption ex=0 on "
      << corrupted_ex0 << "/" << corrupted << "; alias renaming em=1 on " << renamed_ok << "/" << records.size();
    report(4, !records.empty() && corrupted > 0 && self_ok == records.size() && corrupted_ex0 == corrupted &&
                  renamed_ok == records.size(),
           d.str());
}

// --- 5 ---

std::optional<std::size_t> bfs_distance(const GraphSchema& s, const std::string& from, const std::string& to) {
    std::map<std::string, std::size_t> dist{{from, 0}};
    std::queue<std::string> q;
    q.push(from);
    while (!q.empty()) {
        const std::string cur = q.front();
        q.pop();
        if (cur == to) return dist[cur];
        for (const auto& e : s.edge_defs()) {
            for (const auto& [a, b] : {std::pair{e.start_tag, e.end_tag}, std::pair{e.end_tag, e.start_tag}}) {
                if (a == cur && !dist.count(b)) {
                    dist[b] = dist[cur] + 1;
                    q.push(b);
                }
            }
        }
    }
    return std::nullopt;
}

void criterion_astar() {
    Rng rng(505);
    std::size_t pairs = 0;
    std::size_t mismatches = 0;
    std::string first;
    for (std::size_t i = 0; i < kSchemaGraphs; ++i) {
        GraphSchema s = random_schema_graph(rng, kMaxSchemaTags);
        const auto& nd = s.node_defs();
        for (std::size_t a = 0; a < nd.size(); ++a) {
            for (std::size_t b = a + 1; b < nd.size(); ++b) {
                ++pairs;
                auto expect = bfs_distance(s, nd[a].tag, nd[b].tag);
                std::optional<std::size_t> got;
                try {
                    got = join_tables({nd[a].tag, nd[b].tag}, s).edge_types().size();
                } catch (const DisconnectedLabelsError&) {
                }
                if (got != expect) {
                    ++mismatches;
                    if (first.empty()) first = nd[a].tag + "-" + nd[b].tag + " in graph " + std::to_string(i);
                }
            }
        }
    }
    std::ostringstream d;
    d << "join_tables length vs BFS over " << kSchemaGraphs << " schema graphs, " << pairs << " pairs: " << mismatches
      << " mismatches";
    if (!first.empty()) d << "; first: " << first;
    report(5, mismatches == 0 && pairs > 0, d.str());
}

// --- 6 ---

void criterion_split() {
    Rng rng(606);
    auto records = synthetic_records(rng, kSplitN);
    Splits s = split_pool(records, SplitRatios{}, 7);
    std::map<int, std::array<std::size_t, 4>> counts;  // total, train, dev, test
    for (const auto& r : records) ++counts[r.query_type_id][0];
    for (const auto& r : s.train) ++counts[r.query_type_id][1];
    for (const auto& r : s.dev) ++counts[r.query_type_id][2];
    for (const auto& r : s.test) ++counts[r.query_type_id][3];
    bool within = true;
    for (const auto& [t, c] : counts) {
        const double n = static_cast<double>(c[0]);
        const double expect[] = {n * 0.7, n * 0.1, n * 0.2};
        for (int k = 0; k < 3; ++k) {
            if (std::abs(static_cast<double>(c[k + 1]) - expect[k]) > 1.0) within = false;
        }
    }
    std::ostringstream d;
    d << "n=" << kSplitN << " -> " << s.train.size() << "/" << s.dev.size() << "/" << s.test.size()
      << ", per-type within +-1 of proportional: " << (within ? "yes" : "no");
    report(6, s.train.size() == 7000 && s.dev.size() == 1000 && s.test.size() == 2000 && within, d.str());
}

// --- 7 ---

void criterion_determinism(const PipelineRun& a, const PipelineRun& b) {
    std::vector<std::string> diffs;
    auto cmp = [&](const std::string& name, const std::string& x, const std::string& y) {
        if (x != y || x.empty()) diffs.push_back(name);
    };
    cmp("pool", slurp(a.dir / "pool.jsonl"), slurp(b.dir / "pool.jsonl"));
    cmp("rejections", slurp(a.dir / "rejections.jsonl"), slurp(b.dir / "rejections.jsonl"));
    for (const char* s : {"train", "dev", "test"}) {
        const std::string f = std::string("splits/") + s + ".jsonl";
        cmp(f, slurp(a.dir / f), slurp(b.dir / f));
    }
    cmp("predictions", strip_timing_lines(slurp(a.dir / "predictions.jsonl")),
        strip_timing_lines(slurp(b.dir / "predictions.jsonl")));
    cmp("report", strip_report_timing(slurp(a.dir / "report.json")), strip_report_timing(slurp(b.dir / "report.json")));
    cmp("report table", slurp(a.dir / "report.tsv"), slurp(b.dir / "report.tsv"));
    const bool fast = a.seconds < kPipelineSeconds && b.seconds < kPipelineSeconds;
    std::ostringstream d;
    d << "two seed-" << kPipelineSeed << " mock runs, target " << kPipelineTarget << " (" << a.gen.pool.size()
      << " records): " << (diffs.empty() ? "byte-identical" : "differ in") ;
    for (const auto& x : diffs) d << " " << x;
    d << "; run times " << a.seconds << " s and " << b.seconds << " s";
    report(7, diffs.empty() && fast && a.gen.pool.size() == kPipelineTarget, d.str());
}

// --- 8 ---

void criterion_prompt_ordering(const GraphSchema& schema, const PropertyGraph& g, const PipelineRun& run) {
    TrigramCosineScorer scorer;
    LabelDictionary dict = build_dictionary(schema, g);
    std::size_t ok = 0;
    std::size_t equal_full = 0;
    std::string first;
    for (const auto& r : run.splits.test) {
        LinkResult l = link(r.nl, dict, schema, run.splits.train, scorer);
        const auto none = count_tokens(assemble_prompt(l, schema, r.nl, PromptVariant::None).render());
        const auto rel = count_tokens(assemble_prompt(l, schema, r.nl, PromptVariant::Relevant).render());
        const auto full = count_tokens(assemble_prompt(l, schema, r.nl, PromptVariant::Full).render());
        if (none < rel && rel <= full) ++ok;
        else if (first.empty()) first = r.nl;
        if (rel == full) ++equal_full;
    }
    const auto n = run.splits.test.size();
    std::ostringstream d;
    d << "none < relevant <= full token counts on " << ok << "/" << n << " test questions (" << equal_full
      << " fell back to the full schema)";
    if (!first.empty()) d << "; first violation: " << first;
    report(8, n > 0 && ok == n, d.str());
}

// --- 9 ---

void criterion_coverage(const PipelineRun& run) {
    PoolStats st = pool_stats(run.gen.pool);
    std::size_t populated = 0;
    for (const auto& [t, n] : st.per_type) populated += n > 0 ? 1 : 0;
    std::ostringstream d;
    d << "avg nodes " << st.avg_nodes << ", avg edges " << st.avg_edges << ", types populated " << populated
      << "/8, report types " << run.report.per_type.size();
    bool report_cover = run.report.per_type.size() == 8;
    for (const auto& [t, s] : run.report.per_type) report_cover = report_cover && s.count > 0;
    report(9, st.avg_nodes >= kAvgNodesLo && st.avg_nodes <= kAvgNodesHi && populated == 8 && report_cover, d.str());
}

// --- 10 ---

void criterion_gate_monotonicity(const PipelineRun& run) {
    TrigramCosineScorer scorer;
    std::vector<std::size_t> sizes;
    std::vector<std::set<std::size_t>> accepted;
    for (double t : kThresholds) {
        GenerationConfig gc;
        gc.similarity_threshold = t;
        std::set<std::size_t> acc;
        for (std::size_t i = 0; i < run.gen.candidates.size(); ++i) {
            const auto& c = run.gen.candidates[i];
            if (consistency_gate(scorer, c.pair.nl, c.back_translation, gc)) acc.insert(i);
        }
        sizes.push_back(acc.size());
        accepted.push_back(std::move(acc));
    }
    bool monotone = true;
    for (std::size_t i = 1; i < sizes.size(); ++i) {
        monotone = monotone && sizes[i] <= sizes[i - 1] &&
                   std::includes(accepted[i - 1].begin(), accepted[i - 1].end(), accepted[i].begin(), accepted[i].end());
    }
    std::ostringstream d;
    d << "accepted of " << run.gen.candidates.size() << " recorded candidates at thresholds 0.5/0.8/0.95: "
      << sizes[0] << "/" << sizes[1] << "/" << sizes[2];
    report(10, !run.gen.candidates.empty() && monotone, d.str());
}

} // namespace

int main() {
    try {
        criterion_executor_oracle();
        criterion_roundtrip();

        const fs::path base = fs::temp_directory_path() / ("nl2gql_acceptance_" + std::to_string(::getpid()));
        PipelineRun a = run_pipeline(base / "run_a");
        PipelineRun b = run_pipeline(base / "run_b");
        GraphSchema schema = fixture_schema();
        PropertyGraph g = fixture_graph();

        criterion_grounding_replay(g, a);
        criterion_metric_oracles(g, a);
        criterion_astar();
        criterion_split();
        criterion_determinism(a, b);
        criterion_prompt_ordering(schema, g, a);
        criterion_coverage(a);
        criterion_gate_monotonicity(a);
        fs::remove_all(base);
    } catch (const std::exception& ex) {
        std::cout << "FAIL acceptance harness aborted: " << ex.what() << std::endl;
        return 1;
    }
    return failures == 0 ? 0 : 1;
}
