#include <cctype>
#include <map>
#include <regex>

#include "nl2gql/datagen.hpp"
#include "nl2gql/error.hpp"

namespace nl2gql {

namespace {

using namespace gql;

bool word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::string node_phrase(const NodePattern& n) {
    if (n.name) return "the " + n.tag + " named " + *n.name;
    return "every " + n.tag;
}

std::string item_phrase(const Expr& e) {
    switch (e.kind) {
    case ExprKind::Property:
        return "the " + e.property + " of " + (e.tag.empty() ? "the relationship " + e.name : "the " + e.tag);
    case ExprKind::Variable: return e.name;
    default: return "the value of " + print(e);
    }
}

std::string join_items(const std::vector<ProjectionItem>& items, bool use_alias) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += i + 1 == items.size() ? " and " : ", ";
        out += use_alias && !items[i].alias.empty() ? items[i].alias : item_phrase(items[i].expr);
    }
    return out;
}

// Canonical skeleton of a seed template as a regex; capture groups map back
// to slot indices.
struct Shape {
    int type_id = 0;
    std::regex re;
    std::vector<std::size_t> group_slot;  // capture group i+1 -> slot index
};

std::string regex_escape(std::string_view s) {
    static const std::string special = R"(\^$.|?*+()[]{}/)";
    std::string out;
    for (char c : s) {
        if (special.find(c) != std::string::npos) out += '\\';
        out += c;
    }
    return out;
}

std::string marker_for(const PlaceholderSlot& s, std::size_t index) {
    const std::string id = std::to_string(index);
    switch (s.kind) {
    case SlotKind::NodeTag:
    case SlotKind::Relation: return "QQW" + id;
    case SlotKind::Property:
    case SlotKind::Property2:
    case SlotKind::RProperty: return "QQW" + id;
    case SlotKind::Entity: return "[QQS" + id + "]";
    case SlotKind::String: return "[QQS" + id + "]";
    case SlotKind::Numeric: return "[QQN" + id + "]";
    }
    return "";
}

std::string substitute(std::string_view text, const std::map<std::string, std::string, std::less<>>& words,
                       const std::map<std::string, std::string, std::less<>>& brackets) {
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
            auto it = words.find(text.substr(i, j - i));
            out += it != words.end() ? std::string_view(it->second) : text.substr(i, j - i);
            i = j;
            continue;
        }
        out += text[i++];
    }
    return out;
}

Shape build_shape(const QueryTemplate& t) {
    std::map<std::string, std::string, std::less<>> words;
    std::map<std::string, std::string, std::less<>> brackets;
    for (std::size_t i = 0; i < t.slots.size(); ++i) {
        const auto& s = t.slots[i];
        if (s.kind == SlotKind::NodeTag || s.kind == SlotKind::Relation) words[s.token] = marker_for(s, i);
        else brackets[s.token] = marker_for(s, i);
    }
    const std::string skeleton =
        print(canonicalize(parse(substitute(t.gql_template, words, brackets), {.allow_placeholders = true})));

    static const std::regex marker(R"(QQW(\d+)|\[QQS(\d+)\]|\[QQN(\d+)\])");
    Shape shape;
    shape.type_id = t.query_type_id;
    std::map<std::size_t, std::size_t> first_group;
    std::string pattern;
    std::size_t last = 0;
    for (auto it = std::sregex_iterator(skeleton.begin(), skeleton.end(), marker); it != std::sregex_iterator(); ++it) {
        const std::smatch& m = *it;
        pattern += regex_escape(skeleton.substr(last, static_cast<std::size_t>(m.position(0)) - last));
        last = static_cast<std::size_t>(m.position(0) + m.length(0));
        const int which = m[1].matched ? 1 : m[2].matched ? 2 : 3;
        const std::size_t slot = std::stoul(m[which].str());
        auto seen = first_group.find(slot);
        if (seen != first_group.end()) {
            pattern += "\\" + std::to_string(seen->second);
            continue;
        }
        shape.group_slot.push_back(slot);
        first_group[slot] = shape.group_slot.size();
        if (which == 1) pattern += "([A-Za-z_][A-Za-z0-9_]*)";
        else if (which == 2) pattern += R"(((?:[^'\\]|\\.)*))";
        else pattern += R"((\[[A-Za-z_][A-Za-z0-9_]*\]|-?[0-9][0-9.eE+\-]*))";
    }
    pattern += regex_escape(skeleton.substr(last));
    shape.re = std::regex(pattern);
    return shape;
}

const std::vector<Shape>& shapes() {
    static const std::vector<Shape> all = [] {
        std::vector<Shape> v;
        for (const auto& t : seed_templates()) v.push_back(build_shape(t));
        return v;
    }();
    return all;
}

std::string unescape(std::string_view s) {
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '\\' && i + 1 < s.size()) {
            ++i;
            out += s[i] == 'n' ? '\n' : s[i] == 't' ? '\t' : s[i];
        } else {
            out += s[i];
        }
    }
    return out;
}

} // namespace

std::string explain_clause(const Query& query, std::size_t index) {
    const Clause& c = query.clauses.at(index);
    const std::string head = split_clauses(query).at(index).text();
    if (const auto* m = std::get_if<MatchClause>(&c)) {
        std::string s = head + " identifies " + node_phrase(m->nodes[0]);
        for (std::size_t i = 0; i < m->edges.size(); ++i) {
            s += ", connected through " + m->edges[i].edge_type + " to " + node_phrase(m->nodes[i + 1]);
        }
        return s + ".";
    }
    if (std::holds_alternative<WhereClause>(c)) return head + " keeps only the matches satisfying this condition.";
    if (const auto* w = std::get_if<WithClause>(&c)) return head + " passes " + join_items(w->items, true) + " on.";
    if (const auto* r = std::get_if<ReturnClause>(&c)) return head + " returns " + join_items(r->items, false) + ".";
    if (const auto* o = std::get_if<OrderByClause>(&c)) {
        return head + " sorts the rows by " + print(o->key) + (o->descending ? " in descending" : " in ascending") +
               " order.";
    }
    if (const auto* l = std::get_if<LimitClause>(&c)) return head + " keeps the first " + std::to_string(l->count) + " rows.";
    return head + ".";
}

int classify_query_type(const Query& query) {
    const std::string text = print(canonicalize(query));
    for (const auto& s : shapes()) {
        if (std::regex_match(text, s.re)) return s.type_id;
    }
    return 0;
}

std::string compose_nl(const Query& query) {
    const std::string text = print(canonicalize(query));
    for (const auto& s : shapes()) {
        std::smatch m;
        if (!std::regex_match(text, m, s.re)) continue;
        const QueryTemplate& t = seed_template(s.type_id);
        std::map<std::string, std::string, std::less<>> words;
        std::map<std::string, std::string, std::less<>> brackets;
        for (std::size_t g = 0; g < s.group_slot.size(); ++g) {
            const PlaceholderSlot& slot = t.slots[s.group_slot[g]];
            const std::string value = unescape(m[static_cast<int>(g + 1)].str());
            if (slot.kind == SlotKind::NodeTag || slot.kind == SlotKind::Relation) words[slot.token] = value;
            else brackets[slot.token] = value;
        }
        return substitute(t.nl_template, words, brackets);
    }
    std::string out;
    for (std::size_t i = 0; i < query.clauses.size(); ++i) {
        if (i) out += " ";
        out += explain_clause(query, i);
    }
    return out;
}

} // namespace nl2gql
