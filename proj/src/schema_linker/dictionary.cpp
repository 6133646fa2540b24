#include <algorithm>
#include <cctype>

#include "nl2gql/error.hpp"
#include "nl2gql/schema_linker.hpp"
#include "nl2gql/utf8.hpp"

namespace nl2gql {

LabelDictionary build_dictionary(const GraphSchema& schema, const PropertyGraph& graph) {
    LabelDictionary d;
    for (const auto& n : schema.node_defs()) {
        d.entries[n.tag] = n.properties;
        d.tags.insert(n.tag);
    }
    for (const auto& e : schema.edge_defs()) d.entries[e.edge_type] = e.properties;
    for (const auto& [name, ids] : graph.name_index()) {
        auto& tags = d.gazetteer[name];
        for (NodeId id : ids) tags.insert(graph.node(id).tag);
    }
    return d;
}

namespace {

bool ascii_word(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool ascii_alnum(char c) { return static_cast<unsigned char>(c) < 0x80 && std::isalnum(static_cast<unsigned char>(c)); }

struct Key {
    std::string_view text;
    std::vector<std::string> tags;
    bool is_tag_word = false;
};

bool fits_at(std::string_view q, std::size_t pos, std::string_view key) {
    if (q.compare(pos, key.size(), key) != 0) return false;
    if (ascii_alnum(key.front()) && pos > 0 && ascii_word(q[pos - 1])) return false;
    const std::size_t end = pos + key.size();
    if (ascii_alnum(key.back()) && end < q.size() && ascii_word(q[end])) return false;
    return true;
}

std::vector<std::string> resolve(const Mention& m, const std::vector<std::pair<double, const NLGQLRecord*>>& ranked) {
    for (const auto& [score, rec] : ranked) {
        if (score <= 0.0) break;
        gql::Query q;
        try {
            q = gql::parse(rec->gql);
        } catch (const ParseError&) {
            continue;
        }
        for (const auto& c : q.clauses) {
            const auto* match = std::get_if<gql::MatchClause>(&c);
            if (!match) continue;
            for (const auto& n : match->nodes) {
                if (n.name && *n.name == m.text &&
                    std::find(m.candidate_tags.begin(), m.candidate_tags.end(), n.tag) != m.candidate_tags.end()) {
                    return {n.tag};
                }
            }
        }
        std::vector<std::string> shared;
        for (const auto& t : gql::pattern_tags(q)) {
            if (std::find(m.candidate_tags.begin(), m.candidate_tags.end(), t) != m.candidate_tags.end()) shared.push_back(t);
        }
        if (!shared.empty()) {
            std::sort(shared.begin(), shared.end());
            return shared;
        }
    }
    return m.candidate_tags;
}

} // namespace

LabelLinks link_labels(std::string_view question, const LabelDictionary& dict, const std::vector<NLGQLRecord>& pool,
                       const SimilarityScorer& scorer) {
    std::map<std::string_view, Key> keys;
    for (const auto& tag : dict.tags) keys[tag] = Key{tag, {tag}, true};
    for (const auto& [name, tags] : dict.gazetteer) {
        if (name.empty()) continue;
        Key& k = keys[name];
        k.text = name;
        k.tags.assign(tags.begin(), tags.end());
        k.is_tag_word = false;
    }
    std::map<unsigned char, std::vector<const Key*>> by_first;
    for (const auto& [text, key] : keys) by_first[static_cast<unsigned char>(text.front())].push_back(&key);

    LabelLinks out;
    const auto bounds = utf8::boundaries(question);
    std::size_t b = 0;
    while (b + 1 < bounds.size()) {
        const std::size_t pos = bounds[b];
        const Key* best = nullptr;
        if (auto it = by_first.find(static_cast<unsigned char>(question[pos])); it != by_first.end()) {
            for (const Key* k : it->second) {
                if ((!best || k->text.size() > best->text.size()) && fits_at(question, pos, k->text)) best = k;
            }
        }
        if (!best) {
            ++b;
            continue;
        }
        Mention m;
        m.begin = pos;
        m.end = pos + best->text.size();
        m.text = std::string(best->text);
        m.candidate_tags = best->tags;
        m.is_tag_word = best->is_tag_word;
        out.mentions.push_back(std::move(m));
        while (b + 1 < bounds.size() && bounds[b] < pos + best->text.size()) ++b;
    }

    std::vector<std::pair<double, const NLGQLRecord*>> ranked;
    const bool ambiguous = std::any_of(out.mentions.begin(), out.mentions.end(),
                                       [](const Mention& m) { return m.candidate_tags.size() > 1; });
    if (ambiguous) {
        for (const auto& r : pool) ranked.emplace_back(scorer.score(r.nl, question), &r);
        std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    }
    std::set<std::string> labels;
    for (auto& m : out.mentions) {
        m.resolved_tags = m.candidate_tags.size() > 1 ? resolve(m, ranked) : m.candidate_tags;
        labels.insert(m.resolved_tags.begin(), m.resolved_tags.end());
    }
    out.resolved_labels.assign(labels.begin(), labels.end());
    return out;
}

} // namespace nl2gql
