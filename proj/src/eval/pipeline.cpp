#include <cctype>
#include <chrono>

#include "nl2gql/error.hpp"
#include "nl2gql/eval.hpp"

namespace nl2gql {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

} // namespace

std::string extract_gql(std::string_view response) {
    std::string_view body = response;
    if (const std::size_t fence = body.find("```"); fence != std::string_view::npos) {
        std::size_t start = body.find('\n', fence);
        start = start == std::string_view::npos ? fence + 3 : start + 1;
        const std::size_t close = body.find("```", start);
        body = body.substr(start, close == std::string_view::npos ? std::string_view::npos : close - start);
    }
    if (const std::size_t marker = body.find("GQL:"); marker != std::string_view::npos) {
        body = body.substr(marker + 4);
        const std::size_t eol = body.find('\n');
        if (eol != std::string_view::npos && !trim(body.substr(0, eol)).empty()) body = body.substr(0, eol);
    }
    std::string out;
    bool space = false;
    for (char c : trim(body)) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            space = true;
            continue;
        }
        if (space && !out.empty()) out += ' ';
        space = false;
        out += c;
    }
    return out;
}

InferencePipeline::InferencePipeline(const GraphSchema& schema, const PropertyGraph& graph,
                                     std::vector<NLGQLRecord> pool, LlmClient& client,
                                     const SimilarityScorer& scorer, PromptVariant variant)
    : schema_(schema), dict_(build_dictionary(schema, graph)), pool_(std::move(pool)), client_(client),
      scorer_(scorer), variant_(variant) {}

Prediction InferencePipeline::predict(std::size_t id, std::string_view question, Trace* trace) const {
    Prediction p;
    p.id = id;

    auto t0 = std::chrono::steady_clock::now();
    LinkResult linked = link(question, dict_, schema_, pool_, scorer_);
    p.latency.link = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    PromptSpec prompt = assemble_prompt(linked, schema_, question, variant_);
    p.latency.prompt = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    std::string response;
    try {
        response = client_.complete(prompt);
    } catch (const std::exception& ex) {
        p.error_stage = "llm";
        p.error = ex.what();
    }
    p.latency.llm = seconds_since(t0);

    p.pred_gql = extract_gql(response);
    bool rewritten = false;
    if (p.error_stage.empty()) {
        t0 = std::chrono::steady_clock::now();
        try {
            VerifiedMatch v = verify_match_clause(gql::parse(p.pred_gql), linked, schema_);
            if (v.rewritten) {
                p.pred_gql = gql::print(v.query);
                rewritten = true;
            }
        } catch (const ParseError&) {
            // scored as unparseable
        }
        p.latency.link += seconds_since(t0);
    }
    if (trace) *trace = Trace{std::move(linked), std::move(prompt), std::move(response), rewritten};
    return p;
}

NlToGqlSystem InferencePipeline::as_system() const {
    return [this](std::size_t id, const NLGQLRecord& record) { return predict(id, record.nl); };
}

} // namespace nl2gql
