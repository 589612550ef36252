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

/**
 * @file
 * Classical baselines: exact Apriori, sampling estimates, rule generation
 * and the classical-to-quantum query ratio.
 */
#pragma once

#include "qarm/data.hpp"
#include "qarm/oracle.hpp"
#include "qarm/qsim.hpp"

#include <map>
#include <optional>

namespace qarm {

struct IterationStats {
    unsigned k = 0;
    std::uint64_t m_candidates = 0;
    std::uint64_t m_frequent = 0;

    friend bool operator==(const IterationStats &, const IterationStats &) = default;
};

struct FrequentItemset {
    Itemset items;
    ExactSupport support;
};

/// Exact scan of the candidates; keeps those with support >= min_supp.
/// Charges k * |candidates| * N row scans.
std::vector<FrequentItemset> fre_exam(const TransactionDB &db, std::span<const Itemset> candidates,
                                      Ratio min_supp, QueryCounter &counter);

/// Join on a shared (k-1)-prefix, then drop candidates with an infrequent
/// k-subset. Output is sorted and duplicate-free.
std::vector<Itemset> cand_gen(std::span<const Itemset> frequents);

struct AprioriResult {
    std::vector<FrequentItemset> frequents;
    std::vector<IterationStats> stats;
};

/**
 * Level-wise Apriori. The first level's candidates are the items that occur
 * in at least one transaction.
 */
AprioriResult apriori(const TransactionDB &db, Ratio min_supp, QueryCounter &counter,
                      std::optional<unsigned> max_k = std::nullopt);

/// Support estimates from m uniform draws with replacement per candidate.
std::vector<double> sampling_estimate(const TransactionDB &db, std::span<const Itemset> candidates,
                                      std::uint64_t m, Rng &rng, QueryCounter &counter);

struct AssociationRule {
    Itemset antecedent;
    Itemset consequent;
    double support = 0;
    double confidence = 0;
};

/// All rules A => X \ A with supp(X) / supp(A) >= min_conf. Throws
/// std::invalid_argument when a needed subset support is missing.
std::vector<AssociationRule> generate_rules(const std::map<Itemset, double> &supports, double min_conf);

enum class GammaMode {
    /// sum Mc / sum sqrt(Mc Mf); reproduces the published values.
    Unweighted,
    /// sum k Mc / sum k sqrt(Mc Mf).
    Weighted,
};

double gamma_metric(std::span<const IterationStats> stats, GammaMode mode = GammaMode::Unweighted);

/// Apriori level counts published for the FIMI retail and kosarak files.
struct PublishedRun {
    std::string dataset;
    Ratio min_supp;
    std::vector<IterationStats> stats;
    double gamma;
};

const std::vector<PublishedRun> &published_runs();

} // namespace qarm
