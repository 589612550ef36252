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
 * The quantum mining driver: amplitude amplification of the grid values
 * that clear the support threshold, the measurement loop, and the
 * level-wise loop over k.
 *
 * Query accounting. Every measurement is a fresh run of the circuit, so a
 * shot preceded by r amplification iterations costs one preparation A
 * (T - 1 Grover operators) plus r iterations of -A S_0 A^dagger S_good
 * (2 (T - 1) Grover operators each), i.e. 2k(T - 1)(1 + 2r) basic-oracle
 * calls. Confirmation shots are shots with r = 0. The simulator prepares the
 * state once and replays its measurement law shot by shot, charging each
 * shot in full.
 */
#pragma once

#include "qarm/classical.hpp"
#include "qarm/qpe.hpp"

#include <string_view>

namespace qarm {

enum class AmplificationMode {
    /// Renormalize onto the good subspace. Non-physical; no query cost.
    IdealProjection,
    /// round(pi / (4 asin sqrt(p)) - 1/2) iterations for the known good weight p.
    GroverKnown,
    /// Boyer-Brassard-Hoyer-Tapp exponential schedule for unknown p.
    Bbht,
};

std::string_view to_string(AmplificationMode mode);
AmplificationMode parse_amplification_mode(std::string_view text);

/// Grid values y with sin^2(pi y / T) >= min_supp.
class GoodSet {
  public:
    GoodSet(BasisIndex T, double min_supp);

    BasisIndex grid_size() const { return T_; }
    double min_supp() const { return min_supp_; }
    bool contains(BasisIndex y) const;
    std::vector<BasisIndex> members() const;

  private:
    BasisIndex T_;
    double min_supp_;
    std::vector<bool> member_;
};

/// Throws std::invalid_argument unless 0 < min_supp <= 1.
GoodSet good_set(BasisIndex T, double min_supp);

struct AmplifyResult {
    StatevectorXd state;
    std::uint64_t iterations = 0;
    std::uint64_t attempts = 1;
    double good_probability_before = 0;
    double good_probability_after = 0;
};

/// Weight of the estimation register on the good set.
double good_probability(const StatevectorXd &state, const Register &estimation, const GoodSet &good);

/// One amplification iteration -A S_0 A^dagger S_good: flip the sign of the
/// good subspace, then reflect about psi3.
void apply_amplification_iteration(StatevectorXd &state, const StatevectorXd &psi3, const Register &estimation,
                                   const GoodSet &good);

/// Distance between s and min_supp measured in grid steps of the
/// estimation register, |T asin(sqrt s) / pi - T asin(sqrt min_supp) / pi|.
double grid_steps_from_threshold(double support, double min_supp, BasisIndex T);

/// Iteration count used by GroverKnown for good weight p.
std::uint64_t grover_iterations_for(double p);

/**
 * Amplifies psi3 towards the good subspace. Throws std::domain_error when
 * the good weight is zero. In Bbht mode the returned state is the one of
 * the successful attempt, conditioned on the good outcome.
 */
AmplifyResult amplitude_amplify(const PaeState<double> &psi3, const GoodSet &good, AmplificationMode mode,
                                Rng &rng, QueryCounter &counter);

struct MinedItemset {
    Itemset items;
    SupportEstimate estimate;
    bool boundary_uncertain = false;
    /// Number of shots that returned this itemset with a good grid value.
    std::uint64_t observations = 0;
};

struct MiningResult {
    unsigned k = 0;
    std::vector<MinedItemset> found;
    QueryCounter counters;
    AmplificationMode mode = AmplificationMode::Bbht;
    std::uint64_t shots_used = 0;
    std::uint64_t draws = 0;
    std::size_t m_candidates = 0;
};

struct MiningOptions {
    unsigned qubit_cap = kDefaultQubitCap;
    OracleMode oracle_mode = OracleMode::Diagonal;
    /// Consecutive draws without a new itemset before stopping.
    unsigned patience = 25;
    std::uint64_t max_draws = 100000;
    std::uint64_t max_bbht_attempts = 100000;
    /// Fresh single-candidate estimation shots per observed itemset; the
    /// itemset is kept when a strict majority land in the good set. 0 keeps
    /// every observed itemset.
    unsigned confirmation_shots = 5;
    /// qarm_full stops after this level; 0 means no limit.
    unsigned max_k = 0;
    /// Checks boundary-uncertain itemsets against their exact support and
    /// drops those below the threshold. Charges k N row scans per check.
    bool verify_boundary = false;
};

/**
 * Mines the frequent itemsets among candidates: estimation, amplification,
 * then repeated readout of (grid value, candidate) until `patience`
 * consecutive draws bring nothing new. Each observed itemset is then
 * confirmed by `confirmation_shots` unamplified estimates of it alone. Each
 * itemset's estimate is its most often observed grid value. Returns an empty
 * result when no candidate has weight on the good set.
 */
MiningResult qarm_mine_k(const TransactionDB &db, std::span<const Itemset> candidates, unsigned k, BasisIndex T,
                         double min_supp, AmplificationMode mode, Rng &rng, const MiningOptions &options = {});

struct QarmRun {
    std::vector<MiningResult> levels;
    std::vector<IterationStats> stats;
    QueryCounter total;
};

/// Level-wise mining with the quantum step in place of fre_exam.
QarmRun qarm_full(const TransactionDB &db, double min_supp, BasisIndex T, AmplificationMode mode, Rng &rng,
                  const MiningOptions &options = {});

/// Exact supports of the mined itemsets, keeping those that reach min_supp.
std::vector<FrequentItemset> verify_classically(const TransactionDB &db, std::span<const MinedItemset> found,
                                                Ratio min_supp);

} // namespace qarm
