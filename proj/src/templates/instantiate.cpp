#include <algorithm>
#include <cctype>
#include <map>

#include "nl2gql/error.hpp"
#include "nl2gql/rng.hpp"
#include "nl2gql/templates.hpp"

namespace nl2gql {

namespace {

using Assignment = std::map<std::string, std::string, std::less<>>;

bool word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

bool accepts(PropertyConstraint c, const PropertyDef& p) {
    switch (c) {
    case PropertyConstraint::Any: return true;
    case PropertyConstraint::AnyButName: return p.name != kNameProperty;
    case PropertyConstraint::Numeric: return is_numeric(p.kind);
    case PropertyConstraint::String: return p.kind == ValueKind::String;
    }
    return false;
}

bool is_property_slot(const PlaceholderSlot& s) {
    return s.kind == SlotKind::Property || s.kind == SlotKind::Property2 || s.kind == SlotKind::RProperty;
}

class Enumerator {
public:
    Enumerator(const QueryTemplate& t, const GraphSchema& s) : t_(t), s_(s) {}

    std::vector<Assignment> run() {
        relations(0, Assignment{});
        return std::move(out_);
    }

private:
    const QueryTemplate& t_;
    const GraphSchema& s_;
    std::vector<Assignment> out_;

    void relations(std::size_t i, Assignment a) {
        if (i == t_.relations.size()) {
            free_tags(0, std::move(a));
            return;
        }
        const RelationShape& r = t_.relations[i];
        for (const EdgeDef& e : s_.edge_defs()) {
            auto fits = [&](const std::string& slot, const std::string& tag) {
                auto it = a.find(slot);
                return it == a.end() || it->second == tag;
            };
            if (!fits(r.start, e.start_tag) || !fits(r.end, e.end_tag)) continue;
            Assignment next = a;
            next[r.token] = e.edge_type;
            next[r.start] = e.start_tag;
            next[r.end] = e.end_tag;
            relations(i + 1, std::move(next));
        }
    }

    void free_tags(std::size_t i, Assignment a) {
        while (i < t_.slots.size() && (t_.slots[i].kind != SlotKind::NodeTag || a.count(t_.slots[i].token))) ++i;
        if (i == t_.slots.size()) {
            out_.push_back(std::move(a));
            return;
        }
        for (const NodeDef& n : s_.node_defs()) {
            Assignment next = a;
            next[t_.slots[i].token] = n.tag;
            free_tags(i + 1, std::move(next));
        }
    }
};

const std::vector<PropertyDef>* owner_properties(const PlaceholderSlot& slot, const QueryTemplate& t,
                                                 const GraphSchema& s, const Assignment& a) {
    auto it = a.find(slot.owner);
    if (it == a.end()) return nullptr;
    for (const auto& other : t.slots) {
        if (other.token != slot.owner) continue;
        if (other.kind == SlotKind::Relation) {
            const EdgeDef* e = s.find_edge(it->second);
            return e ? &e->properties : nullptr;
        }
        const NodeDef* n = s.find_node(it->second);
        return n ? &n->properties : nullptr;
    }
    return nullptr;
}

std::vector<std::string> candidates(const PlaceholderSlot& slot, const QueryTemplate& t, const GraphSchema& s,
                                    const Assignment& a) {
    std::vector<std::string> out;
    if (const auto* props = owner_properties(slot, t, s, a)) {
        for (const auto& p : *props) {
            if (accepts(slot.constraint, p)) out.push_back(p.name);
        }
    }
    return out;
}

// Single left-to-right pass so replacements are never rescanned.
std::string substitute(std::string_view text, const Assignment& words, const Assignment& brackets) {
    std::string out;
    std::size_t i = 0;
    while (i < text.size()) {
        if (text[i] == '[') {
            const std::size_t close = text.find(']', i);
            if (close != std::string_view::npos) {
                auto it = brackets.find(text.substr(i, close - i + 1));
                if (it != brackets.end()) {
                    out += it->second;
                    i = close + 1;
                    continue;
                }
            }
        }
        if (word_char(text[i])) {
            std::size_t j = i;
            while (j < text.size() && word_char(text[j])) ++j;
            const std::string_view word = text.substr(i, j - i);
            auto it = words.find(word);
            out += it != words.end() ? std::string_view(it->second) : word;
            i = j;
            continue;
        }
        out += text[i++];
    }
    return out;
}

} // namespace

TemplatePair instantiate(const QueryTemplate& tmpl, const GraphSchema& schema, std::uint64_t seed) {
    std::vector<Assignment> structures = Enumerator(tmpl, schema).run();
    if (structures.empty()) {
        // Relations constrain the structure, so they are blamed before tags.
        for (const auto& slot : tmpl.slots) {
            if (slot.kind == SlotKind::Relation) throw NoCompatibleSlotError(slot.token);
        }
        for (const auto& slot : tmpl.slots) {
            if (slot.kind == SlotKind::NodeTag) throw NoCompatibleSlotError(slot.token);
        }
    }

    std::vector<Assignment> viable;
    for (const auto& a : structures) {
        bool ok = true;
        for (const auto& slot : tmpl.slots) {
            if (is_property_slot(slot) && candidates(slot, tmpl, schema, a).empty()) {
                ok = false;
                break;
            }
        }
        if (ok) viable.push_back(a);
    }
    if (viable.empty()) {
        for (const auto& slot : tmpl.slots) {
            if (!is_property_slot(slot)) continue;
            const bool somewhere = std::any_of(structures.begin(), structures.end(), [&](const Assignment& a) {
                return !candidates(slot, tmpl, schema, a).empty();
            });
            if (!somewhere) throw NoCompatibleSlotError(slot.token);
        }
        for (const auto& slot : tmpl.slots) {
            if (is_property_slot(slot) && candidates(slot, tmpl, schema, structures.front()).empty()) {
                throw NoCompatibleSlotError(slot.token);
            }
        }
    }

    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(tmpl.query_type_id)));
    Assignment words = viable[rng.index(viable.size())];
    Assignment brackets;
    for (const auto& slot : tmpl.slots) {
        if (!is_property_slot(slot)) continue;
        const auto c = candidates(slot, tmpl, schema, words);
        brackets[slot.token] = c[rng.index(c.size())];
    }

    TemplatePair out;
    out.query_type_id = tmpl.query_type_id;
    out.nl = substitute(tmpl.nl_template, words, brackets);
    out.gql = gql::print(gql::parse(substitute(tmpl.gql_template, words, brackets), {.allow_placeholders = true}));
    return out;
}

} // namespace nl2gql
