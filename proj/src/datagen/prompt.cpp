#include <cctype>

#include "nl2gql/datagen.hpp"
#include "nl2gql/error.hpp"
#include "nl2gql/rng.hpp"
#include "nl2gql/utf8.hpp"

namespace nl2gql {

std::string PromptSpec::render() const {
    std::string out;
    if (!schema_block.empty()) out += schema_block + "\n\n";
    out += "[Task Description]: " + task_description + "\n\n";
    out += payload;
    return out;
}

namespace {

std::string property_list(const std::vector<PropertyDef>& props, bool zh) {
    std::string out = "[";
    for (std::size_t i = 0; i < props.size(); ++i) {
        if (i) out += ", ";
        out += "('" + props[i].name + "', '" + std::string(to_string(props[i].kind)) + "'";
        if (zh && !props[i].zh_gloss.empty()) out += ", '" + props[i].zh_gloss + "'";
        out += ")";
    }
    return out + "]";
}

} // namespace

std::string flatten_schema(const GraphSchema& schema, std::string_view header, bool zh) {
    std::string out(header);
    out += ":\nNodes\n";
    for (const auto& n : schema.node_defs()) {
        out += "{'tag': '" + n.tag + "', 'properties': " + property_list(n.properties, zh) + "}\n";
    }
    out += "Edges";
    for (const auto& e : schema.edge_defs()) {
        out += "\n{'edge': '" + e.edge_type + "', 'start_tag': '" + e.start_tag + "', 'end_tag': '" + e.end_tag +
               "', 'properties': " + property_list(e.properties, zh) + "}";
    }
    return out;
}

std::size_t count_tokens(std::string_view text) {
    std::size_t n = 0;
    const auto b = utf8::boundaries(text);
    bool in_word = false;
    for (std::size_t i = 0; i + 1 < b.size(); ++i) {
        const unsigned char c = static_cast<unsigned char>(text[b[i]]);
        const bool ascii = b[i + 1] - b[i] == 1 && c < 0x80;
        if (ascii && std::isalnum(c)) {
            if (!in_word) ++n;
            in_word = true;
            continue;
        }
        in_word = false;
        if (ascii && std::isspace(c)) continue;
        ++n;
    }
    return n;
}

std::string generation_task_description(int query_type_id) {
    const QueryTemplate& t = seed_template(query_type_id);
    std::string desc = t.description;
    if (!desc.empty()) desc[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(desc[0])));
    return "Please generate a new NL-GQL template data pair of the same type as the provided NL based on the "
           "given Graph database schema and NL-GQL demonstrations. In the Graph database schema section, Nodes "
           "contain information about all entities, including node tags and their corresponding properties. "
           "Edges contain information about all relationships, including the head and tail nodes of the edge "
           "and any edge properties. In the NL-GQL demonstrations, named entities are replaced with "
           "placeholders: '[entity]' stands for the name of a node, '[m]' and '[mount]' for a number and "
           "'[string]' for a piece of text. The query type is " +
           t.type_name + ", in this type " + desc +
           " Reply with one line starting with \"NL:\" and one line starting with \"GQL:\".";
}

GenPrompt build_gen_prompt(const GraphSchema& schema, const DataPool& pool, int query_type_id,
                           const GenerationConfig& cfg, std::uint64_t seed) {
    GenPrompt out;
    Rng rng(mix_seed(seed, 0x67656eULL));
    std::vector<const NLGQLRecord*> same_type;
    for (const auto& r : pool.records()) {
        if (r.query_type_id == query_type_id) same_type.push_back(&r);
    }
    rng.shuffle(same_type);
    for (const NLGQLRecord* r : same_type) {
        if (out.demonstrations.size() >= cfg.k_demonstrations) break;
        out.demonstrations.push_back({query_type_id, r->template_nl, r->template_gql});
    }
    const QueryTemplate& seed_tmpl = seed_template(query_type_id);
    for (std::uint64_t i = 0; out.demonstrations.size() < cfg.k_demonstrations; ++i) {
        out.demonstrations.push_back(instantiate(seed_tmpl, schema, mix_seed(rng.next(), i)));
    }

    out.prompt.schema_block = flatten_schema(schema, kSchemaHeader);
    out.prompt.task_description = generation_task_description(query_type_id);
    out.prompt.payload = "[NL-GQL]:";
    for (const auto& d : out.demonstrations) out.prompt.payload += "\nNL: " + d.nl + "\nGQL: " + d.gql + "\n";
    return out;
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

} // namespace

GenOutcome parse_gen_response(std::string_view response, const GraphSchema& schema, int query_type_id) {
    std::optional<std::string> nl;
    std::optional<std::string> gql_text;
    std::size_t pos = 0;
    while (pos <= response.size()) {
        std::size_t end = response.find('\n', pos);
        if (end == std::string_view::npos) end = response.size();
        const std::string_view line = trim(response.substr(pos, end - pos));
        if (!nl && line.substr(0, 3) == "NL:") nl = std::string(trim(line.substr(3)));
        else if (!gql_text && line.substr(0, 4) == "GQL:") gql_text = std::string(trim(line.substr(4)));
        pos = end + 1;
    }
    if (!nl || !gql_text || nl->empty() || gql_text->empty()) {
        return Rejection{"format", "response lacks an NL: line and a GQL: line"};
    }
    gql::Query q;
    try {
        q = gql::parse(*gql_text, {.allow_placeholders = true});
    } catch (const ParseError& ex) {
        return Rejection{"parse", ex.what()};
    }
    try {
        check_query(schema, q);
    } catch (const UnknownSchemaItemError& ex) {
        return Rejection{"schema", ex.what()};
    } catch (const TypeMismatchError& ex) {
        return Rejection{"type", ex.what()};
    }
    return TemplatePair{query_type_id, *nl, gql::print(q)};
}

GenOutcome nl_gql_gen(LlmClient& client, const GenPrompt& prompt, const GraphSchema& schema, int query_type_id) {
    std::string response;
    try {
        response = client.complete(prompt.prompt);
    } catch (const std::exception& ex) {
        return Rejection{"llm", ex.what()};
    }
    return parse_gen_response(response, schema, query_type_id);
}

PromptSpec build_cot_prompt(const GraphSchema& schema, const std::vector<TemplatePair>& examples,
                            std::string_view gql_template) {
    PromptSpec p;
    p.schema_block = flatten_schema(schema, kSchemaHeader);
    p.task_description =
        "Please translate the given GQL template into a natural language question. Explain each keyword "
        "clause of the GQL first, then combine the explanations and give the question in double quotes.";
    p.payload = "[CoT-based GQL2NL]:";
    for (const auto& ex : examples) {
        std::string cot;
        try {
            const gql::Query q = gql::parse(ex.gql, {.allow_placeholders = true});
            for (std::size_t i = 0; i < q.clauses.size(); ++i) cot += explain_clause(q, i) + " ";
        } catch (const ParseError&) {
            continue;
        }
        p.payload += "\nGQL: " + ex.gql + "\nCoT: " + cot + "Combining these parts, so the output is: \"" + ex.nl +
                     "\"\n";
    }
    p.payload += "\nGQL: " + std::string(gql_template) + "\nCoT:";
    return p;
}

NlOutcome extract_final_nl(std::string_view response) {
    const std::size_t close = response.rfind('"');
    if (close == std::string_view::npos || close == 0) return Rejection{"extract", "no quoted sentence in response"};
    const std::size_t open = response.rfind('"', close - 1);
    if (open == std::string_view::npos) return Rejection{"extract", "unbalanced quotes in response"};
    const std::string_view nl = trim(response.substr(open + 1, close - open - 1));
    if (nl.empty()) return Rejection{"extract", "empty quoted sentence"};
    return std::string(nl);
}

NlOutcome gql2nl_gen(LlmClient& client, const PromptSpec& prompt) {
    std::string response;
    try {
        response = client.complete(prompt);
    } catch (const std::exception& ex) {
        return Rejection{"llm", ex.what()};
    }
    return extract_final_nl(response);
}

bool consistency_gate(const SimilarityScorer& scorer, std::string_view q1, std::string_view q2,
                      const GenerationConfig& cfg) {
    return scorer.score(q1, q2) >= cfg.similarity_threshold;
}

} // namespace nl2gql
