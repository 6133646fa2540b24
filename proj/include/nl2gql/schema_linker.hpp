#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "nl2gql/datagen.hpp"

namespace nl2gql {

struct LabelDictionary {
    // node tag or edge type -> its properties
    std::map<std::string, std::vector<PropertyDef>, std::less<>> entries;
    // entity name -> tags of the nodes carrying it
    std::map<std::string, std::set<std::string>, std::less<>> gazetteer;
    std::set<std::string, std::less<>> tags;
};

LabelDictionary build_dictionary(const GraphSchema& schema, const PropertyGraph& graph);

struct Mention {
    std::size_t begin = 0;  // byte span in the question
    std::size_t end = 0;
    std::string text;
    std::vector<std::string> candidate_tags;
    std::vector<std::string> resolved_tags;
    bool is_tag_word = false;  // the text is a tag label itself, not an entity name
};

struct LabelLinks {
    std::vector<Mention> mentions;
    std::vector<std::string> resolved_labels;  // sorted, distinct
};

// Longest-match scan for entity names and tag labels. Names that begin or
// end with an ASCII letter or digit must sit on a word boundary there;
// other scripts match as plain substrings. Ambiguous names take the tag used
// by the most similar pool record, or keep every candidate.
LabelLinks link_labels(std::string_view question, const LabelDictionary& dict, const std::vector<NLGQLRecord>& pool,
                       const SimilarityScorer& scorer);

struct JoinPath {
    // Alternating tag, edge type, tag, ... A walk when is_chain is false.
    std::vector<std::string> elements;
    bool is_chain = true;

    std::vector<std::string> tags() const;
    std::vector<std::string> edge_types() const;
};

// Shortest connection of the labels over the schema viewed as an undirected
// unit-weight graph. Two labels: A* with a zero heuristic from the smaller
// label, equal-length paths ordered lexicographically. Three or more: a
// minimum spanning tree over pairwise distances, its paths merged and
// flattened. Throws DisconnectedLabelsError.
JoinPath join_tables(const std::vector<std::string>& labels, const GraphSchema& schema);

struct LinkResult {
    std::vector<Mention> mentions;
    std::vector<std::string> resolved_labels;
    JoinPath join_path;
    GraphSchema relevant_schema;
    bool fell_back_to_full = false;  // no labels, or the linked labels are disconnected
};

LinkResult link(std::string_view question, const LabelDictionary& dict, const GraphSchema& schema,
                const std::vector<NLGQLRecord>& pool, const SimilarityScorer& scorer);

// Tags in `tags` and edge defs on the path; closed under edge endpoints.
GraphSchema sub_schema(const GraphSchema& schema, const std::vector<std::string>& tags,
                       const std::vector<std::string>& edge_types);

enum class PromptVariant { Relevant, RelevantZh, Full, FullZh, None };

std::string_view to_string(PromptVariant v);
// Accepts relevant, relevant-zh, relevant_zh, full, full-zh, full_zh, none.
PromptVariant parse_prompt_variant(std::string_view text);

std::string inference_task_description();

PromptSpec assemble_prompt(const LinkResult& link, const GraphSchema& schema, std::string_view question,
                           PromptVariant variant);

struct VerifiedMatch {
    gql::Query query;
    bool rewritten = false;
    bool rewrite_impossible = false;
};

// Keeps the query when every MATCH step is an edge of the join path (in
// schema direction) and its tags lie on the path or among the labels;
// otherwise replaces a single MATCH chain by the join path.
VerifiedMatch verify_match_clause(const gql::Query& candidate, const LinkResult& link, const GraphSchema& schema);

} // namespace nl2gql
