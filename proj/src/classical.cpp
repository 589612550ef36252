// Copyright 2026 The qarm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qarm/classical.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <unordered_map>

namespace qarm {

namespace {

using Bitmap = std::vector<std::uint64_t>;

Bitmap column_bitmap(const TransactionDB &db, ItemId j) {
    Bitmap bits((db.n_transactions() + 63) / 64, 0);
    for (RowId i : db.column(j)) bits[i >> 6] |= std::uint64_t{1} << (i & 63);
    return bits;
}

} // namespace

std::vector<FrequentItemset> fre_exam(const TransactionDB &db, std::span<const Itemset> candidates,
                                      Ratio min_supp, QueryCounter &counter) {
    std::vector<FrequentItemset> out;
    if (candidates.empty()) return out;
    const std::size_t k = candidates.front().size();
    const std::size_t n = db.n_transactions();

    std::unordered_map<ItemId, Bitmap> bitmaps;
    auto bitmap = [&](ItemId j) -> const Bitmap & {
        auto it = bitmaps.find(j);
        if (it == bitmaps.end()) it = bitmaps.emplace(j, column_bitmap(db, j)).first;
        return it->second;
    };

    Bitmap acc;
    for (const auto &c : candidates) {
        if (c.size() != k) throw std::invalid_argument("fre_exam candidates must share one size");
        if (c.back() >= db.n_items()) throw std::out_of_range("candidate " + c.to_string() + " out of range");
        std::uint64_t count = 0;
        if (k == 1) {
            count = db.column_count(c[0]);
        } else {
            acc = bitmap(c[0]);
            for (std::size_t l = 1; l < k; ++l) {
                const auto &b = bitmap(c[l]);
                for (std::size_t w = 0; w < acc.size(); ++w) acc[w] &= b[w];
            }
            for (auto w : acc) count += static_cast<std::uint64_t>(std::popcount(w));
        }
        if (min_supp.reached_by(count, n)) out.push_back({c, {count, n}});
    }
    counter.classical_row_scans += k * candidates.size() * n;
    return out;
}

std::vector<Itemset> cand_gen(std::span<const Itemset> frequents) {
    std::vector<Itemset> sorted(frequents.begin(), frequents.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<Itemset> out;
    if (sorted.empty()) return out;
    const std::size_t k = sorted.front().size();

    auto is_frequent = [&](const Itemset &x) { return std::binary_search(sorted.begin(), sorted.end(), x); };
    auto same_prefix = [&](const Itemset &a, const Itemset &b) {
        return std::equal(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(k - 1), b.begin());
    };

    for (std::size_t a = 0; a < sorted.size(); ++a) {
        for (std::size_t b = a + 1; b < sorted.size() && same_prefix(sorted[a], sorted[b]); ++b) {
            std::vector<ItemId> joined(sorted[a].begin(), sorted[a].end());
            joined.push_back(sorted[b].back());
            Itemset candidate(std::move(joined));
            bool keep = true;
            // Subsets dropping one of the last two items are the join parents.
            for (std::size_t drop = 0; keep && drop + 2 < candidate.size(); ++drop) {
                std::vector<ItemId> sub;
                for (std::size_t l = 0; l < candidate.size(); ++l)
                    if (l != drop) sub.push_back(candidate[l]);
                keep = is_frequent(Itemset(std::move(sub)));
            }
            if (keep) out.push_back(std::move(candidate));
        }
    }
    return out;
}

AprioriResult apriori(const TransactionDB &db, Ratio min_supp, QueryCounter &counter,
                      std::optional<unsigned> max_k) {
    if (min_supp.num == 0 || min_supp.num > min_supp.den)
        throw std::invalid_argument("min_supp must lie in (0, 1]");
    AprioriResult result;
    std::vector<Itemset> candidates;
    for (ItemId j = 0; j < db.n_items(); ++j)
        if (db.column_count(j) > 0) candidates.push_back(Itemset{j});

    for (unsigned k = 1; !candidates.empty() && (!max_k || k <= *max_k); ++k) {
        auto frequent = fre_exam(db, candidates, min_supp, counter);
        result.stats.push_back({k, candidates.size(), frequent.size()});
        std::vector<Itemset> level;
        level.reserve(frequent.size());
        for (const auto &f : frequent) level.push_back(f.items);
        result.frequents.insert(result.frequents.end(), frequent.begin(), frequent.end());
        candidates = cand_gen(level);
    }
    return result;
}

std::vector<double> sampling_estimate(const TransactionDB &db, std::span<const Itemset> candidates,
                                      std::uint64_t m, Rng &rng, QueryCounter &counter) {
    if (m == 0) throw std::invalid_argument("sample count must be positive");
    std::vector<double> estimates;
    estimates.reserve(candidates.size());
    for (const auto &c : candidates) {
        std::uint64_t hits = 0;
        for (std::uint64_t draw = 0; draw < m; ++draw) {
            const auto i = static_cast<RowId>(rng.below(db.n_transactions()));
            auto row = db.row(i);
            hits += std::includes(row.begin(), row.end(), c.begin(), c.end()) ? 1 : 0;
        }
        estimates.push_back(static_cast<double>(hits) / static_cast<double>(m));
        counter.basic_oracle_calls += c.size() * m;
    }
    return estimates;
}

std::vector<AssociationRule> generate_rules(const std::map<Itemset, double> &supports, double min_conf) {
    std::vector<AssociationRule> rules;
    for (const auto &[x, sx] : supports) {
        const std::size_t k = x.size();
        if (k < 2) continue;
        if (k > 30) throw std::invalid_argument("itemset too large for rule enumeration");
        for (std::uint32_t mask = 1; mask + 1 < (1u << k); ++mask) {
            std::vector<ItemId> a, b;
            for (std::size_t l = 0; l < k; ++l) ((mask >> l) & 1 ? a : b).push_back(x[l]);
            Itemset antecedent(std::move(a));
            auto it = supports.find(antecedent);
            if (it == supports.end())
                throw std::invalid_argument("missing support for " + antecedent.to_string() +
                                            "; input is not downward closed");
            if (it->second <= 0) continue;
            const double conf = sx / it->second;
            if (conf >= min_conf - 1e-12) rules.push_back({std::move(antecedent), Itemset(std::move(b)), sx, conf});
        }
    }
    return rules;
}

double gamma_metric(std::span<const IterationStats> stats, GammaMode mode) {
    if (stats.empty()) throw std::invalid_argument("gamma needs at least one iteration");
    double num = 0, den = 0;
    for (const auto &s : stats) {
        const double w = mode == GammaMode::Weighted ? static_cast<double>(s.k) : 1.0;
        num += w * static_cast<double>(s.m_candidates);
        den += w * std::sqrt(static_cast<double>(s.m_candidates) * static_cast<double>(s.m_frequent));
    }
    if (den == 0) throw std::invalid_argument("gamma denominator is zero (no frequent itemsets)");
    return num / den;
}

const std::vector<PublishedRun> &published_runs() {
    static const std::vector<PublishedRun> runs{
        {"retail", {1, 100}, {{1, 16470, 70}, {2, 2415, 58}, {3, 37, 25}, {4, 6, 6}}, 12.75},
        {"retail", {1, 50}, {{1, 16470, 20}, {2, 190, 22}, {3, 14, 12}, {4, 2, 1}}, 25.54},
        {"kosarak", {1, 100}, {{1, 41270, 54}, {2, 1431, 140}, {3, 194, 127}, {4, 57, 52}, {5, 11, 10}}, 19.87},
        {"kosarak", {1, 50}, {{1, 41270, 27}, {2, 351, 45}, {3, 45, 34}, {4, 13, 13}, {5, 2, 2}}, 33.74},
    };
    return runs;
}

} // namespace qarm
