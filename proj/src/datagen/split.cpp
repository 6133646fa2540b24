#include <algorithm>
#include <array>
#include <cmath>
#include <map>

#include "nl2gql/datagen.hpp"
#include "nl2gql/error.hpp"
#include "nl2gql/rng.hpp"

namespace nl2gql {

namespace {

constexpr std::size_t kParts = 3;  // train, dev, test

std::size_t floor_share(long double x) { return static_cast<std::size_t>(std::floor(x + 1e-9L)); }

// Controlled rounding of a strata x parts table: every cell ends at floor or
// floor + 1 of its ideal value while row sums equal stratum sizes and column
// sums equal the requested part sizes. Solved as a unit-capacity flow;
// cells with a nonzero fraction are tried first, largest fraction first.
class Rounding {
public:
    Rounding(std::vector<std::size_t> row_extra, std::array<std::size_t, kParts> col_extra,
             std::vector<std::array<long double, kParts>> frac)
        : row_(std::move(row_extra)), col_(col_extra), frac_(std::move(frac)),
          take_(row_.size(), std::array<int, kParts>{}) {}

    std::vector<std::array<int, kParts>> solve() {
        for (bool allow_exact : {false, true}) {
            for (std::size_t t = 0; t < row_.size(); ++t) {
                while (row_used(t) < row_[t]) {
                    std::vector<bool> seen(row_.size(), false);
                    if (!augment(t, seen, allow_exact)) break;
                }
            }
        }
        return take_;
    }

private:
    std::vector<std::size_t> row_;
    std::array<std::size_t, kParts> col_;
    std::vector<std::array<long double, kParts>> frac_;
    std::vector<std::array<int, kParts>> take_;

    std::size_t row_used(std::size_t t) const {
        return static_cast<std::size_t>(take_[t][0] + take_[t][1] + take_[t][2]);
    }
    std::size_t col_used(std::size_t p) const {
        std::size_t n = 0;
        for (const auto& r : take_) n += static_cast<std::size_t>(r[p]);
        return n;
    }

    std::vector<std::size_t> parts_by_fraction(std::size_t t) const {
        std::vector<std::size_t> order{0, 1, 2};
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return frac_[t][a] > frac_[t][b]; });
        return order;
    }

    // Finds room for one more unit in row t, possibly moving other rows'
    // units between parts.
    bool augment(std::size_t t, std::vector<bool>& seen, bool allow_exact) {
        seen[t] = true;
        for (std::size_t p : parts_by_fraction(t)) {
            if (take_[t][p] || (!allow_exact && frac_[t][p] <= 0)) continue;
            if (col_used(p) < col_[p]) {
                take_[t][p] = 1;
                return true;
            }
            // Column full: try to reroute a row currently holding p.
            for (std::size_t u = 0; u < row_.size(); ++u) {
                if (seen[u] || !take_[u][p]) continue;
                take_[u][p] = 0;
                take_[t][p] = 1;
                if (augment(u, seen, allow_exact)) return true;
                take_[t][p] = 0;
                take_[u][p] = 1;
            }
        }
        return false;
    }
};

} // namespace

Splits split_pool(const std::vector<NLGQLRecord>& records, SplitRatios ratios, std::uint64_t seed) {
    if (!(ratios.train > 0 && ratios.dev > 0 && ratios.test > 0)) throw ConfigError("split ratios must be positive");
    const long double total = static_cast<long double>(ratios.train) + ratios.dev + ratios.test;
    const std::array<long double, kParts> weight{ratios.train / total, ratios.dev / total, ratios.test / total};
    const std::size_t n = records.size();
    std::array<std::size_t, kParts> size{};
    size[1] = floor_share(static_cast<long double>(n) * weight[1]);
    size[2] = floor_share(static_cast<long double>(n) * weight[2]);
    size[0] = n - size[1] - size[2];

    std::map<int, std::vector<std::size_t>> by_type;
    for (std::size_t i = 0; i < n; ++i) by_type[records[i].query_type_id].push_back(i);

    std::vector<int> types;
    std::vector<std::array<std::size_t, kParts>> base;
    std::vector<std::array<long double, kParts>> frac;
    std::vector<std::size_t> row_extra;
    std::array<std::size_t, kParts> col_extra = size;
    for (const auto& [type, members] : by_type) {
        types.push_back(type);
        std::array<std::size_t, kParts> b{};
        std::array<long double, kParts> f{};
        std::size_t used = 0;
        for (std::size_t p = 0; p < kParts; ++p) {
            const long double ideal = static_cast<long double>(members.size()) * weight[p];
            b[p] = floor_share(ideal);
            f[p] = std::max(0.0L, ideal - static_cast<long double>(b[p]));
            used += b[p];
            col_extra[p] -= std::min(col_extra[p], b[p]);
        }
        base.push_back(b);
        frac.push_back(f);
        row_extra.push_back(members.size() - used);
    }
    const auto extra = Rounding(row_extra, col_extra, frac).solve();

    std::vector<int> part(n, 0);
    for (std::size_t s = 0; s < types.size(); ++s) {
        std::vector<std::size_t> order = by_type[types[s]];
        Rng rng(mix_seed(seed, static_cast<std::uint64_t>(types[s])));
        rng.shuffle(order);
        const std::size_t dev = base[s][1] + static_cast<std::size_t>(extra[s][1]);
        const std::size_t test = base[s][2] + static_cast<std::size_t>(extra[s][2]);
        for (std::size_t i = 0; i < order.size(); ++i) part[order[i]] = i < dev ? 1 : i < dev + test ? 2 : 0;
    }
    Splits out;
    for (std::size_t i = 0; i < n; ++i) {
        (part[i] == 1 ? out.dev : part[i] == 2 ? out.test : out.train).push_back(records[i]);
    }
    return out;
}

} // namespace nl2gql
