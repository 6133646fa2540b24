#pragma once

#include <string>
#include <string_view>

#include "nl2gql/schema.hpp"

namespace nl2gql {

struct PromptSpec {
    std::string schema_block;  // empty when the prompt carries no schema
    std::string task_description;
    std::string payload;

    // Sections separated by blank lines; byte-deterministic.
    std::string render() const;
    bool operator==(const PromptSpec&) const = default;
};

// Flattened schema text:
//   <header>:
//   Nodes
//   {'tag': 'stock', 'properties': [('name', 'string'), ('code', 'string')]}
//   Edges
//   {'edge': 'belong_to', 'start_tag': 'stock', 'end_tag': 'trade', 'properties': []}
// With zh set, each property tuple gains its gloss as a third element.
std::string flatten_schema(const GraphSchema& schema, std::string_view header, bool zh = false);

inline constexpr std::string_view kSchemaHeader = "[Schema of Graph DB]";
inline constexpr std::string_view kRelevantSchemaHeader = "[Relevant Schema of Graph DB]";

// Rough LLM token estimate: each ASCII alphanumeric run, each other
// non-space ASCII character and each non-ASCII code point counts once.
std::size_t count_tokens(std::string_view text);

} // namespace nl2gql
