#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "nl2gql/datagen.hpp"
#include "nl2gql/error.hpp"
#include "nl2gql/rng.hpp"

namespace nl2gql {

namespace {

using namespace gql;

bool word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::string replace_word(std::string_view text, std::string_view from, std::string_view to) {
    std::string out;
    std::size_t i = 0;
    while (i < text.size()) {
        if (word_char(text[i])) {
            std::size_t j = i;
            while (j < text.size() && word_char(text[j])) ++j;
            const std::string_view w = text.substr(i, j - i);
            out += w == from ? to : w;
            i = j;
        } else {
            out += text[i++];
        }
    }
    return out;
}

std::vector<std::string_view> lines_of(std::string_view text) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        out.push_back(text.substr(pos, end - pos));
        pos = end + 1;
    }
    return out;
}

bool starts_with(std::string_view s, std::string_view p) { return s.substr(0, p.size()) == p; }

int kind_class(ValueKind k) { return is_numeric(k) ? 0 : k == ValueKind::String ? 1 : 2; }

// A property reference: owner is a tag or, for edge properties, an edge type.
struct PropRef {
    bool on_edge = false;
    std::string owner;
    std::string property;
    auto operator<=>(const PropRef&) const = default;
};

std::map<std::string, std::string> edge_aliases(const Query& q) {
    std::map<std::string, std::string> out;
    for (const auto& c : q.clauses) {
        if (const auto* m = std::get_if<MatchClause>(&c)) {
            for (const auto& e : m->edges) {
                if (!e.alias.empty()) out[e.alias] = e.edge_type;
            }
        }
    }
    return out;
}

template <typename Fn>
void for_each_expr_mut(Query& q, Fn&& fn) {
    auto walk = [&](auto& self, Expr& e) -> void {
        fn(e);
        for (auto& a : e.args) self(self, a);
    };
    for (auto& c : q.clauses) {
        if (auto* w = std::get_if<WhereClause>(&c)) walk(walk, w->predicate);
        else if (auto* wi = std::get_if<WithClause>(&c))
            for (auto& it : wi->items) walk(walk, it.expr);
        else if (auto* r = std::get_if<ReturnClause>(&c))
            for (auto& it : r->items) walk(walk, it.expr);
        else if (auto* o = std::get_if<OrderByClause>(&c)) walk(walk, o->key);
    }
}

std::vector<PropRef> property_refs(const Query& q) {
    const auto aliases = edge_aliases(q);
    std::set<PropRef> refs;
    visit_exprs(q, [&](const Expr& e) {
        if (e.kind != ExprKind::Property) return;
        if (!e.tag.empty()) {
            refs.insert({false, e.tag, e.property});
        } else if (auto it = aliases.find(e.name); it != aliases.end()) {
            refs.insert({true, it->second, e.property});
        }
    });
    return {refs.begin(), refs.end()};
}

// Swaps one referenced property for another of the same owner and value
// class. Returns the (old, new) names, or nullopt when nothing is swappable.
std::optional<std::pair<std::string, std::string>> swap_property(Query& q, const GraphSchema& schema, Rng& rng) {
    const auto refs = property_refs(q);
    std::vector<std::pair<PropRef, std::vector<std::string>>> options;
    for (const auto& r : refs) {
        const std::vector<PropertyDef>* props = nullptr;
        if (r.on_edge) {
            if (const EdgeDef* e = schema.find_edge(r.owner)) props = &e->properties;
        } else if (const NodeDef* n = schema.find_node(r.owner)) {
            props = &n->properties;
        }
        if (!props) continue;
        const auto cur = std::find_if(props->begin(), props->end(), [&](const PropertyDef& p) { return p.name == r.property; });
        if (cur == props->end()) continue;
        std::vector<std::string> alts;
        for (const auto& p : *props) {
            const bool taken = std::any_of(refs.begin(), refs.end(), [&](const PropRef& o) {
                return o.on_edge == r.on_edge && o.owner == r.owner && o.property == p.name;
            });
            if (!taken && p.name != kNameProperty && kind_class(p.kind) == kind_class(cur->kind)) alts.push_back(p.name);
        }
        if (!alts.empty()) options.emplace_back(r, std::move(alts));
    }
    if (options.empty()) return std::nullopt;
    const auto& [ref, alts] = options[rng.index(options.size())];
    const std::string to = alts[rng.index(alts.size())];
    const auto aliases = edge_aliases(q);
    for_each_expr_mut(q, [&](Expr& e) {
        if (e.kind != ExprKind::Property || e.property != ref.property) return;
        if (ref.on_edge) {
            auto it = aliases.find(e.name);
            if (e.tag.empty() && it != aliases.end() && it->second == ref.owner) e.property = to;
        } else if (e.tag == ref.owner) {
            e.property = to;
        }
    });
    return std::make_pair(ref.property, to);
}

// Changes one literal compared in WHERE or RETURN.
bool perturb_literal(Query& q) {
    bool done = false;
    for_each_expr_mut(q, [&](Expr& e) {
        if (done || e.kind != ExprKind::Literal) return;
        if (e.literal.is_int()) e.literal = Value(e.literal.as_int() + 1);
        else if (e.literal.is_float()) e.literal = Value(e.literal.as_float() + 1.0);
        else if (e.literal.is_string()) e.literal = Value(e.literal.as_string() + "x");
        else return;
        done = true;
    });
    return done;
}

} // namespace

MockLlm::MockLlm(GraphSchema schema, MockLlmOptions options)
    : schema_(std::move(schema)), options_(std::move(options)) {}

std::string MockLlm::complete(const PromptSpec& prompt) {
    const std::uint64_t h = mix_seed(fnv1a(prompt.render()), options_.seed);
    const std::string_view payload = prompt.payload;
    if (starts_with(payload, "[NL-GQL]")) return generate(payload, h);
    if (starts_with(payload, "[CoT-based GQL2NL]")) return back_translate(payload);
    if (starts_with(payload, "[NL]")) return infer(payload, h);
    return "I cannot help with that request.";
}

std::string MockLlm::generate(std::string_view payload, std::uint64_t h) const {
    std::vector<TemplatePair> demos;
    std::optional<std::string> nl;
    for (std::string_view line : lines_of(payload)) {
        if (starts_with(line, "NL: ")) nl = std::string(line.substr(4));
        else if (starts_with(line, "GQL: ") && nl) {
            demos.push_back({0, *nl, std::string(line.substr(5))});
            nl.reset();
        }
    }
    if (demos.empty()) return "No demonstrations were given.";
    Rng rng(h);
    const TemplatePair& demo = demos[rng.index(demos.size())];
    Query q;
    try {
        q = parse(demo.gql, {.allow_placeholders = true});
    } catch (const ParseError&) {
        return "NL: " + demo.nl + "\nGQL: " + demo.gql;
    }
    std::string out_nl = demo.nl;
    if (auto swapped = swap_property(q, schema_, rng)) out_nl = replace_word(demo.nl, swapped->first, swapped->second);
    std::string out_gql = print(q);

    if (rng.chance(options_.corruption_rate)) {
        switch (rng.index(3)) {
        case 0: {
            // NL that no longer describes the query.
            std::vector<std::string> others;
            for (const auto& d : demos) {
                if (d.nl != demo.nl && d.nl != out_nl) others.push_back(d.nl);
            }
            out_nl = others.empty() ? "List every node related to [entity]." : others[rng.index(others.size())];
            break;
        }
        case 1: {
            const auto refs = property_refs(q);
            if (!refs.empty()) {
                const std::string bad = refs[rng.index(refs.size())].property;
                out_gql = replace_word(out_gql, bad, bad + "_total");
            }
            break;
        }
        default: {
            const std::size_t paren = out_gql.find(')');
            if (paren != std::string::npos) out_gql.erase(paren, 1);
            break;
        }
        }
    }
    return "NL: " + out_nl + "\nGQL: " + out_gql;
}

std::string MockLlm::back_translate(std::string_view payload) const {
    std::string_view target;
    for (std::string_view line : lines_of(payload)) {
        if (starts_with(line, "GQL: ")) target = line.substr(5);
    }
    Query q;
    try {
        q = parse(target, {.allow_placeholders = true});
    } catch (const ParseError&) {
        return "The query could not be explained.";
    }
    std::string out;
    for (std::size_t i = 0; i < q.clauses.size(); ++i) out += explain_clause(q, i) + " ";
    return out + "Combining these parts, so the output is: \"" + compose_nl(q) + "\"";
}

std::string MockLlm::infer(std::string_view payload, std::uint64_t h) const {
    std::string_view question;
    for (std::string_view line : lines_of(payload)) {
        if (starts_with(line, "[NL]: ")) question = line.substr(6);
    }
    auto it = options_.answer_book.find(question);
    if (it == options_.answer_book.end()) return "I do not know.";
    Rng rng(h);
    if (!rng.chance(options_.corruption_rate)) return it->second;
    Query q;
    try {
        q = parse(it->second);
    } catch (const ParseError&) {
        return it->second;
    }
    const bool changed = rng.index(2) == 0 ? perturb_literal(q) : swap_property(q, schema_, rng).has_value();
    if (!changed) perturb_literal(q);
    return print(q);
}

} // namespace nl2gql
