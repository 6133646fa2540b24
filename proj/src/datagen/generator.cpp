#include <future>
#include <numeric>

#include <nlohmann/json.hpp>

#include "nl2gql/datagen.hpp"
#include "nl2gql/error.hpp"
#include "nl2gql/rng.hpp"

namespace nl2gql {

void GenerationConfig::validate() const {
    if (k_demonstrations < 1) throw ConfigError("k_demonstrations must be at least 1");
    if (!(similarity_threshold > 0.0 && similarity_threshold <= 1.0)) {
        throw ConfigError("similarity_threshold must lie in (0, 1]");
    }
    std::size_t sum = 0;
    for (const auto& [type, q] : quotas) {
        if (type < 1 || type > kQueryTypeCount) throw ConfigError("quota for unknown query type " + std::to_string(type));
        sum += q;
    }
    if (!quotas.empty() && sum != target_count) throw ConfigError("quotas must sum to target_count");
    if (jobs < 1) throw ConfigError("jobs must be at least 1");
}

std::map<int, std::size_t> GenerationConfig::effective_quotas() const {
    std::map<int, std::size_t> out;
    if (!quotas.empty()) {
        for (int t = 1; t <= kQueryTypeCount; ++t) {
            auto it = quotas.find(t);
            out[t] = it == quotas.end() ? 0 : it->second;
        }
        return out;
    }
    const std::size_t base = target_count / kQueryTypeCount;
    const std::size_t extra = target_count % kQueryTypeCount;
    for (int t = 1; t <= kQueryTypeCount; ++t) out[t] = base + (static_cast<std::size_t>(t) <= extra ? 1 : 0);
    return out;
}

std::size_t GenerationConfig::effective_max_iterations() const {
    return max_iterations > 0 ? max_iterations : 20 * target_count + 100;
}

nlohmann::ordered_json to_json(const RejectionRecord& r) {
    nlohmann::ordered_json j;
    j["stage"] = r.stage;
    j["reason"] = r.reason;
    j["candidate"] = r.candidate;
    return j;
}

namespace {

// Result of the two LLM steps for one candidate; no pool access.
struct Drafted {
    int type = 0;
    std::uint64_t seed = 0;
    std::optional<Rejection> rejection;
    std::string candidate_text;
    TemplatePair pair;
    std::string back_translation;
};

Drafted draft(const GraphSchema& schema, LlmClient& client, const GenPrompt& prompt, const GenerationConfig& cfg,
              int type, std::uint64_t seed) {
    Drafted d;
    d.type = type;
    d.seed = seed;
    std::string response;
    try {
        response = client.complete(prompt.prompt);
    } catch (const std::exception& ex) {
        d.rejection = Rejection{"llm", ex.what()};
        return d;
    }
    GenOutcome gen = parse_gen_response(response, schema, type);
    if (auto* rej = std::get_if<Rejection>(&gen)) {
        d.rejection = *rej;
        d.candidate_text = response;  // the raw reply, for the rejection log
        return d;
    }
    d.pair = std::get<TemplatePair>(gen);
    d.candidate_text = "NL: " + d.pair.nl + "\nGQL: " + d.pair.gql;
    std::vector<TemplatePair> examples = prompt.demonstrations;
    if (examples.size() > cfg.k_demonstrations) examples.resize(cfg.k_demonstrations);
    NlOutcome back = gql2nl_gen(client, build_cot_prompt(schema, examples, d.pair.gql));
    if (auto* rej = std::get_if<Rejection>(&back)) {
        d.rejection = *rej;
        return d;
    }
    d.back_translation = std::get<std::string>(back);
    return d;
}

} // namespace

GenerationResult self_instruct_loop(const GraphSchema& schema, const PropertyGraph& graph, DataPool pool,
                                    LlmClient& client, const SimilarityScorer& scorer, const GenerationConfig& cfg) {
    cfg.validate();
    GenerationResult result;
    result.pool = std::move(pool);
    const auto quotas = cfg.effective_quotas();
    const std::size_t budget = cfg.effective_max_iterations();
    std::map<int, std::size_t> accepted;
    std::size_t accepted_total = 0;
    int cursor = 0;

    auto reject = [&](std::string stage, std::string reason, std::string candidate) {
        ++result.rejection_histogram[stage];
        result.rejections.push_back({std::move(stage), std::move(reason), std::move(candidate)});
    };

    while (accepted_total < cfg.target_count) {
        if (result.iterations >= budget) {
            result.budget_exhausted = true;
            break;
        }
        // Schedule a batch round-robin over under-quota types.
        std::map<int, std::size_t> inflight;
        std::vector<std::pair<int, std::uint64_t>> batch;
        while (batch.size() < cfg.jobs && result.iterations + batch.size() < budget) {
            int chosen = 0;
            for (int step = 0; step < kQueryTypeCount; ++step) {
                const int t = (cursor + step) % kQueryTypeCount + 1;
                if (accepted[t] + inflight[t] < quotas.at(t)) {
                    chosen = t;
                    cursor = t % kQueryTypeCount;
                    break;
                }
            }
            if (chosen == 0) break;
            ++inflight[chosen];
            batch.emplace_back(chosen, mix_seed(cfg.rng_seed, result.iterations + batch.size()));
        }
        if (batch.empty()) break;  // every quota filled

        std::vector<GenPrompt> prompts;
        std::vector<std::optional<std::string>> prompt_errors;
        for (const auto& [type, seed] : batch) {
            try {
                prompts.push_back(build_gen_prompt(schema, result.pool, type, cfg, seed));
                prompt_errors.emplace_back();
            } catch (const Error& ex) {
                prompts.emplace_back();
                prompt_errors.emplace_back(ex.what());
            }
        }

        std::vector<Drafted> drafts(batch.size());
        if (batch.size() == 1) {
            if (!prompt_errors[0]) drafts[0] = draft(schema, client, prompts[0], cfg, batch[0].first, batch[0].second);
        } else {
            std::vector<std::future<Drafted>> futures;
            for (std::size_t i = 0; i < batch.size(); ++i) {
                if (prompt_errors[i]) {
                    futures.emplace_back();
                    continue;
                }
                futures.push_back(std::async(std::launch::async, draft, std::cref(schema), std::ref(client),
                                             std::cref(prompts[i]), std::cref(cfg), batch[i].first, batch[i].second));
            }
            for (std::size_t i = 0; i < batch.size(); ++i) {
                if (futures[i].valid()) drafts[i] = futures[i].get();
            }
        }

        // Serialized commits in batch order.
        for (std::size_t i = 0; i < batch.size(); ++i) {
            ++result.iterations;
            if (prompt_errors[i]) {
                reject("prompt", *prompt_errors[i], "");
                continue;
            }
            Drafted& d = drafts[i];
            if (d.rejection) {
                reject(d.rejection->stage, d.rejection->reason, d.candidate_text);
                continue;
            }
            const double sim = scorer.score(d.pair.nl, d.back_translation);
            result.candidates.push_back({d.type, d.pair, d.back_translation, sim});
            if (sim < cfg.similarity_threshold) {
                reject("gate", "similarity " + std::to_string(sim) + " below threshold against \"" +
                                   d.back_translation + "\"",
                       d.candidate_text);
                continue;
            }
            if (accepted[d.type] >= quotas.at(d.type)) {
                reject("quota", "query type " + std::to_string(d.type) + " is full", d.candidate_text);
                continue;
            }
            Grounded g = ground(d.pair, graph, mix_seed(d.seed, 0x67726e64ULL));
            if (auto* rej = std::get_if<Rejection>(&g)) {
                reject(rej->stage, rej->reason, d.candidate_text);
                continue;
            }
            result.pool.append(std::move(std::get<NLGQLRecord>(g)));
            ++accepted[d.type];
            ++accepted_total;
        }
    }
    return result;
}

} // namespace nl2gql
