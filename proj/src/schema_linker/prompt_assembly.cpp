#include "nl2gql/error.hpp"
#include "nl2gql/schema_linker.hpp"

namespace nl2gql {

std::string_view to_string(PromptVariant v) {
    switch (v) {
    case PromptVariant::Relevant: return "relevant";
    case PromptVariant::RelevantZh: return "relevant-zh";
    case PromptVariant::Full: return "full";
    case PromptVariant::FullZh: return "full-zh";
    case PromptVariant::None: return "none";
    }
    return "?";
}

PromptVariant parse_prompt_variant(std::string_view text) {
    if (text == "relevant") return PromptVariant::Relevant;
    if (text == "relevant-zh" || text == "relevant_zh") return PromptVariant::RelevantZh;
    if (text == "full") return PromptVariant::Full;
    if (text == "full-zh" || text == "full_zh") return PromptVariant::FullZh;
    if (text == "none") return PromptVariant::None;
    throw ConfigError("unknown prompt variant '" + std::string(text) + "'");
}

std::string inference_task_description() {
    return "You are a graph database expert. Please write the corresponding graph query language based on the "
           "relevant schema and natural language.";
}

PromptSpec assemble_prompt(const LinkResult& link, const GraphSchema& schema, std::string_view question,
                           PromptVariant variant) {
    PromptSpec p;
    const bool zh = variant == PromptVariant::RelevantZh || variant == PromptVariant::FullZh;
    const bool relevant = variant == PromptVariant::Relevant || variant == PromptVariant::RelevantZh;
    if (variant != PromptVariant::None) {
        // A relevant sub-schema that is the whole schema is presented as such.
        if (relevant && !link.fell_back_to_full && !(link.relevant_schema == schema)) {
            p.schema_block = flatten_schema(link.relevant_schema, kRelevantSchemaHeader, zh);
        } else {
            p.schema_block = flatten_schema(schema, kSchemaHeader, zh);
        }
    }
    p.task_description = inference_task_description();
    p.payload = "[NL]: " + std::string(question);
    return p;
}

} // namespace nl2gql
