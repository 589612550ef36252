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

#include "qarm/mining.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qarm {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kGridTolerance = 1e-12;
constexpr double kBbhtGrowth = 6.0 / 5.0;
constexpr double kZeroWeight = 1e-12;

double grid_value(BasisIndex y, BasisIndex T) {
    const double s = std::sin(kPi * static_cast<double>(y) / static_cast<double>(T));
    return s * s;
}

void charge_grovers(QueryCounter &c, unsigned k, std::uint64_t grovers) {
    c.grover_applications += grovers;
    c.phase_oracle_k_calls += grovers;
    c.basic_oracle_calls += 2 * std::uint64_t{k} * grovers;
}

void charge_preparation(QueryCounter &c, unsigned k, BasisIndex T) { charge_grovers(c, k, T - 1); }

void charge_iterations(QueryCounter &c, unsigned k, BasisIndex T, std::uint64_t r) {
    charge_grovers(c, k, 2 * (T - 1) * r);
    c.amplification_iterations += r;
}

/// Preparation plus r amplification iterations, measured once.
void charge_shot(QueryCounter &c, unsigned k, BasisIndex T, std::uint64_t r) {
    charge_preparation(c, k, T);
    charge_iterations(c, k, T, r);
    c.measurements += 1;
}

void project_onto_good(StatevectorXd &state, const Register &estimation, const GoodSet &good) {
    for (BasisIndex b = 0; b < state.dim(); ++b)
        if (!good.contains(estimation.value(b))) state[b] = 0;
    const double n = state.norm();
    if (!(n > 0)) throw std::domain_error("no frequent candidates at this threshold/grid");
    state.amplitudes() /= n;
}

/**
 * Readout law of Q^j psi3 over (grid value, candidate), for the j values a
 * run asks for. Iterates are generated in increasing j and each law is
 * kept, so a BBHT schedule only pays for the largest j it reaches.
 */
class ReadoutModel {
  public:
    ReadoutModel(const PaeState<double> &pae, const GoodSet &good)
        : pae_(pae), good_(good), readout_(pae.registers.readout()), current_(pae.state) {
        laws_.push_back(law_of(current_));
    }

    std::size_t n_candidates() const { return pae_.candidates.size(); }

    const std::vector<double> &law(std::uint64_t j) {
        while (laws_.size() <= j) {
            apply_amplification_iteration(current_, pae_.state, pae_.registers.estimation, good_);
            laws_.push_back(law_of(current_));
        }
        return laws_[j];
    }

    /// Law of the psi3 readout conditioned on a good grid value.
    const std::vector<double> &projected_law() {
        if (projected_.empty()) {
            projected_ = laws_.front();
            double total = 0;
            for (BasisIndex y = 0; y < pae_.T; ++y) {
                for (std::size_t c = 0; c < n_candidates(); ++c) {
                    auto &p = projected_[y * n_candidates() + c];
                    if (!good_.contains(y)) p = 0;
                    total += p;
                }
            }
            if (!(total > 0)) throw std::domain_error("no frequent candidates at this threshold/grid");
            for (auto &p : projected_) p /= total;
        }
        return projected_;
    }

    /// Estimation-register law of candidate c alone, without amplification.
    std::vector<double> candidate_law(std::size_t c) const {
        std::vector<double> out(pae_.T);
        double total = 0;
        for (BasisIndex y = 0; y < pae_.T; ++y) total += out[y] = laws_.front()[y * n_candidates() + c];
        for (auto &p : out) p /= total;
        return out;
    }

    double good_weight(const std::vector<double> &law) const {
        double w = 0;
        for (BasisIndex y = 0; y < pae_.T; ++y)
            if (good_.contains(y))
                for (std::size_t c = 0; c < n_candidates(); ++c) w += law[y * n_candidates() + c];
        return w;
    }

  private:
    std::vector<double> law_of(const StatevectorXd &state) const {
        const auto joint = marginal_probabilities(state, std::span<const Register>(readout_));
        std::vector<double> law(pae_.T * n_candidates(), 0.0);
        const unsigned t = pae_.registers.estimation.width;
        for (BasisIndex v = 0; v < joint.size(); ++v) {
            if (joint[v] == 0) continue;
            const BasisIndex y = v & (pae_.T - 1);
            if (auto c = pae_.candidate_of(v >> t)) law[y * n_candidates() + *c] += joint[v];
        }
        return law;
    }

    const PaeState<double> &pae_;
    const GoodSet &good_;
    std::vector<Register> readout_;
    StatevectorXd current_;
    std::vector<std::vector<double>> laws_;
    std::vector<double> projected_;
};

} // namespace

std::string_view to_string(AmplificationMode mode) {
    switch (mode) {
    case AmplificationMode::IdealProjection: return "ideal-projection";
    case AmplificationMode::GroverKnown: return "grover-known";
    case AmplificationMode::Bbht: return "bbht";
    }
    return "unknown";
}

AmplificationMode parse_amplification_mode(std::string_view text) {
    if (text == "ideal-projection") return AmplificationMode::IdealProjection;
    if (text == "grover-known") return AmplificationMode::GroverKnown;
    if (text == "bbht") return AmplificationMode::Bbht;
    throw std::invalid_argument("unknown amplification mode '" + std::string(text) + "'");
}

// ----------------------------------------------------------------- GoodSet

GoodSet::GoodSet(BasisIndex T, double min_supp) : T_(T), min_supp_(min_supp) {
    if (!is_power_of_two(T)) throw std::invalid_argument("T must be a power of two");
    if (!(min_supp > 0.0 && min_supp <= 1.0)) throw std::invalid_argument("min_supp must lie in (0, 1]");
    member_.resize(T);
    for (BasisIndex y = 0; y < T; ++y) member_[y] = grid_value(y, T) >= min_supp - kGridTolerance;
}

bool GoodSet::contains(BasisIndex y) const { return y < T_ && member_[y]; }

std::vector<BasisIndex> GoodSet::members() const {
    std::vector<BasisIndex> out;
    for (BasisIndex y = 0; y < T_; ++y)
        if (contains(y)) out.push_back(y);
    return out;
}

GoodSet good_set(BasisIndex T, double min_supp) { return GoodSet(T, min_supp); }

// ----------------------------------------------------------- amplification

double good_probability(const StatevectorXd &state, const Register &estimation, const GoodSet &good) {
    const auto p = marginal_probabilities(state, estimation);
    double w = 0;
    for (BasisIndex y = 0; y < p.size(); ++y)
        if (good.contains(y)) w += p[y];
    return w;
}

void apply_amplification_iteration(StatevectorXd &state, const StatevectorXd &psi3, const Register &estimation,
                                   const GoodSet &good) {
    for (BasisIndex b = 0; b < state.dim(); ++b)
        if (good.contains(estimation.value(b))) state[b] = -state[b];
    reflect_about_state(state, psi3);
}

double grid_steps_from_threshold(double support, double min_supp, BasisIndex T) {
    const double scale = static_cast<double>(T) / kPi;
    return std::abs(scale * std::asin(std::sqrt(support)) - scale * std::asin(std::sqrt(min_supp)));
}

std::uint64_t grover_iterations_for(double p) {
    if (!(p > 0.0 && p <= 1.0 + 1e-12)) throw std::invalid_argument("good weight must lie in (0, 1]");
    const double theta = std::asin(std::sqrt(std::min(p, 1.0)));
    const double r = std::round(kPi / (4 * theta) - 0.5);
    return r < 0 ? 0 : static_cast<std::uint64_t>(r);
}

AmplifyResult amplitude_amplify(const PaeState<double> &psi3, const GoodSet &good, AmplificationMode mode,
                                Rng &rng, QueryCounter &counter) {
    const Register &est = psi3.registers.estimation;
    const double p = good_probability(psi3.state, est, good);
    if (!(p > kZeroWeight)) throw std::domain_error("no frequent candidates at this threshold/grid");

    AmplifyResult result{psi3.state, 0, 1, p, p};
    switch (mode) {
    case AmplificationMode::IdealProjection:
        project_onto_good(result.state, est, good);
        break;
    case AmplificationMode::GroverKnown: {
        const auto r = grover_iterations_for(p);
        for (std::uint64_t i = 0; i < r; ++i) apply_amplification_iteration(result.state, psi3.state, est, good);
        charge_iterations(counter, psi3.k, psi3.T, r);
        result.iterations = r;
        break;
    }
    case AmplificationMode::Bbht: {
        const double cap = std::sqrt(static_cast<double>(psi3.T * psi3.candidates.size()));
        double m = 1.0;
        std::vector<StatevectorXd> iterates{psi3.state};
        for (result.attempts = 1;; ++result.attempts) {
            if (result.attempts > 100000) throw std::runtime_error("BBHT schedule did not succeed");
            const auto j = rng.below(static_cast<std::uint64_t>(std::ceil(m)));
            while (iterates.size() <= j) {
                iterates.push_back(iterates.back());
                apply_amplification_iteration(iterates.back(), psi3.state, est, good);
            }
            if (result.attempts > 1) charge_preparation(counter, psi3.k, psi3.T);
            charge_iterations(counter, psi3.k, psi3.T, j);
            ++counter.measurements;
            result.iterations += j;
            const double pj = good_probability(iterates[j], est, good);
            if (rng.uniform() < pj) {
                result.state = iterates[j];
                project_onto_good(result.state, est, good);
                break;
            }
            m = std::min(kBbhtGrowth * m, cap);
        }
        break;
    }
    }
    result.good_probability_after = good_probability(result.state, est, good);
    return result;
}

// ------------------------------------------------------------------ mining

MiningResult qarm_mine_k(const TransactionDB &db, std::span<const Itemset> candidates, unsigned k, BasisIndex T,
                         double min_supp, AmplificationMode mode, Rng &rng, const MiningOptions &options) {
    const GoodSet good(T, min_supp);
    MiningResult result;
    result.k = k;
    result.mode = mode;
    result.m_candidates = candidates.size();

    QueryCounter construction;
    const auto pae = parallel_amplitude_estimation<double>(db, candidates, k, T, construction,
                                                           {options.qubit_cap, options.oracle_mode, std::nullopt});
    ReadoutModel model(pae, good);
    const std::size_t mc = candidates.size();
    const double p = model.good_weight(model.law(0));
    if (!(p > kZeroWeight)) return result;

    // Per candidate: good grid values in order of first observation, with counts.
    std::vector<std::vector<std::pair<BasisIndex, std::uint64_t>>> readings(mc);
    std::vector<std::size_t> discovery_order;

    auto record = [&](BasisIndex y, std::size_t c) {
        const BasisIndex canonical = std::min(y, T - y);
        auto &r = readings[c];
        const bool novel = r.empty();
        if (novel) discovery_order.push_back(c);
        auto it = std::find_if(r.begin(), r.end(), [&](const auto &e) { return e.first == canonical; });
        if (it == r.end()) r.emplace_back(canonical, 1);
        else ++it->second;
        return novel;
    };
    auto split = [&](std::size_t cell) { return std::pair<BasisIndex, std::size_t>{cell / mc, cell % mc}; };

    const std::uint64_t known_r = mode == AmplificationMode::GroverKnown ? grover_iterations_for(p) : 0;
    const double bbht_cap = std::sqrt(static_cast<double>(T * mc));

    unsigned streak = 0;
    while (streak < options.patience && result.draws < options.max_draws) {
        ++result.draws;
        bool novel = false;
        switch (mode) {
        case AmplificationMode::IdealProjection: {
            charge_shot(result.counters, k, T, 0);
            ++result.shots_used;
            auto [y, c] = split(rng.pick(model.projected_law()));
            novel = record(y, c);
            break;
        }
        case AmplificationMode::GroverKnown: {
            charge_shot(result.counters, k, T, known_r);
            ++result.shots_used;
            auto [y, c] = split(rng.pick(model.law(known_r)));
            if (good.contains(y)) novel = record(y, c);
            break;
        }
        case AmplificationMode::Bbht: {
            double m = 1.0;
            for (std::uint64_t attempt = 0;; ++attempt) {
                if (attempt >= options.max_bbht_attempts) throw std::runtime_error("BBHT schedule did not succeed");
                const auto j = rng.below(static_cast<std::uint64_t>(std::ceil(m)));
                charge_shot(result.counters, k, T, j);
                ++result.shots_used;
                auto [y, c] = split(rng.pick(model.law(j)));
                if (good.contains(y)) {
                    novel = record(y, c);
                    break;
                }
                m = std::min(kBbhtGrowth * m, bbht_cap);
            }
            break;
        }
        }
        streak = novel ? 0 : streak + 1;
    }

    for (std::size_t c : discovery_order) {
        if (options.confirmation_shots > 0) {
            const auto law = model.candidate_law(c);
            unsigned votes = 0;
            for (unsigned shot = 0; shot < options.confirmation_shots; ++shot) {
                charge_shot(result.counters, k, T, 0);
                ++result.shots_used;
                if (good.contains(rng.pick(law))) ++votes;
            }
            if (2 * votes <= options.confirmation_shots) continue;
        }
        const auto &r = readings[c];
        auto best = r.begin();
        std::uint64_t total = 0;
        for (auto it = r.begin(); it != r.end(); ++it) {
            total += it->second;
            if (it->second > best->second) best = it;
        }
        MinedItemset mined{candidates[c], decode_support(best->first, T), false, total};
        for (const auto &[y, count] : r) {
            const double value = grid_value(y, T);
            const double step = std::abs(grid_value(y + 1, T) - value);
            if (std::abs(value - min_supp) < step) mined.boundary_uncertain = true;
        }
        if (mined.boundary_uncertain && options.verify_boundary) {
            result.counters.classical_row_scans += k * db.n_transactions();
            const auto s = exact_support(db, mined.items);
            if (s.value() < min_supp - kGridTolerance) continue;
        }
        result.found.push_back(std::move(mined));
    }
    std::sort(result.found.begin(), result.found.end(),
              [](const MinedItemset &a, const MinedItemset &b) { return a.items < b.items; });
    return result;
}

QarmRun qarm_full(const TransactionDB &db, double min_supp, BasisIndex T, AmplificationMode mode, Rng &rng,
                  const MiningOptions &options) {
    QarmRun run;
    std::vector<Itemset> candidates;
    for (ItemId j = 0; j < db.n_items(); ++j) candidates.push_back(Itemset{j});
    for (unsigned k = 1; !candidates.empty() && (options.max_k == 0 || k <= options.max_k); ++k) {
        auto level = qarm_mine_k(db, candidates, k, T, min_supp, mode, rng, options);
        run.stats.push_back({k, candidates.size(), level.found.size()});
        run.total += level.counters;
        std::vector<Itemset> frequent;
        for (const auto &f : level.found) frequent.push_back(f.items);
        run.levels.push_back(std::move(level));
        candidates = cand_gen(frequent);
    }
    return run;
}

std::vector<FrequentItemset> verify_classically(const TransactionDB &db, std::span<const MinedItemset> found,
                                                Ratio min_supp) {
    std::vector<FrequentItemset> out;
    for (const auto &f : found) {
        const auto s = exact_support(db, f.items);
        if (min_supp.reached_by(s.numerator, s.denominator)) out.push_back({f.items, s});
    }
    return out;
}

} // namespace qarm
