#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>

#include "nl2gql/datagen.hpp"
#include "nl2gql/utf8.hpp"

namespace nl2gql {

namespace {

using Gram = std::u32string;

std::map<Gram, double> trigrams(std::string_view text) {
    std::u32string cps;
    for (char32_t c : utf8::decode(text)) cps.push_back(c < 0x80 ? static_cast<char32_t>(std::tolower(static_cast<int>(c))) : c);
    std::map<Gram, double> out;
    if (cps.size() < 3) {
        if (!cps.empty()) out[cps] = 1.0;
        return out;
    }
    for (std::size_t i = 0; i + 3 <= cps.size(); ++i) out[cps.substr(i, 3)] += 1.0;
    return out;
}

} // namespace

double TrigramCosineScorer::score(std::string_view a, std::string_view b) const {
    if (a == b) return 1.0;
    const auto va = trigrams(a);
    const auto vb = trigrams(b);
    if (va.empty() || vb.empty()) return 0.0;
    double dot = 0.0;
    double na = 0.0;
    double nb = 0.0;
    for (const auto& [g, c] : va) {
        na += c * c;
        auto it = vb.find(g);
        if (it != vb.end()) dot += c * it->second;
    }
    for (const auto& [g, c] : vb) nb += c * c;
    const double s = dot / (std::sqrt(na) * std::sqrt(nb));
    return std::min(1.0, std::max(0.0, s));
}

} // namespace nl2gql
