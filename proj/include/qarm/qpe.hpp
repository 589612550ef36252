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
 * Grover operator, parallel amplitude estimation and support decoding.
 *
 * For a candidate itemset with support s = sin^2(theta), the Grover
 * operator restricted to that candidate rotates the uniform transaction
 * state by 2 theta. Phase estimation with T = 2^t grid points then leaves
 * the estimation register concentrated near T theta / pi and its mirror
 * T - T theta / pi; either decodes to sin^2(pi y / T).
 *
 * Running it on a superposition of candidates gives every candidate its
 * own estimate in one pass.
 */
#pragma once

#include "qarm/data.hpp"
#include "qarm/oracle.hpp"
#include "qarm/qsim.hpp"

#include <map>
#include <optional>

namespace qarm {

struct GroverSpectrum {
    double theta = 0;
    double support = 0;
    /// s in {0, 1}: the two eigenvectors collapse into one.
    bool degenerate = false;

    std::complex<double> eigenvalue_plus() const { return std::polar(1.0, 2 * theta); }
    std::complex<double> eigenvalue_minus() const { return std::polar(1.0, -2 * theta); }
};

GroverSpectrum grover_spectrum(double support);

struct PhaseDistribution {
    std::vector<double> probability; ///< indexed by y in [0, T)

    BasisIndex grid_size() const { return probability.size(); }
    double operator[](BasisIndex y) const { return probability[y]; }
};

/// Closed-form estimation-register law for one candidate of support s.
PhaseDistribution analytic_phase_distribution(double support, BasisIndex T);

/// |<y|E_T(omega)>|^2, with the integer-T*omega case as a point mass.
double phase_kernel(double t_omega, BasisIndex y, BasisIndex T);

double total_variation(std::span<const double> p, std::span<const double> q);

struct SupportEstimate {
    BasisIndex y = 0; ///< canonical grid index min(y, T - y)
    BasisIndex T = 0;
    double value = 0; ///< sin^2(pi y / T)

    /// sqrt(s (1 - s)) / T at the decoded value; the scale of the error.
    double epsilon_scale() const { return std::sqrt(value * (1 - value)) / static_cast<double>(T); }
};

SupportEstimate decode_support(BasisIndex y, BasisIndex T);

enum class CandidateEncoding {
    /// Item registers hold sum_j |C_j>/sqrt(Mc).
    Plain,
    /// An index register holds sum_j |j>|C_j>/sqrt(Mc).
    Indexed,
};

/// Qubit allocation for one parallel-estimation run.
struct QarmRegisters {
    RegisterLayout layout;
    Register estimation;
    Register transaction;
    std::optional<Register> index;
    std::vector<Register> items;
    std::vector<unsigned> ancillas;
    std::optional<unsigned> kickback;

    OracleRegisters oracle() const { return {transaction, items, ancillas, kickback}; }

    /// Registers read out in the final measurement: estimation, index (if
    /// any), then the item registers.
    std::vector<Register> readout() const {
        std::vector<Register> r{estimation};
        if (index) r.push_back(*index);
        r.insert(r.end(), items.begin(), items.end());
        return r;
    }
};

QarmRegisters plan_qarm_registers(std::size_t n_transactions, std::size_t n_items, std::size_t n_candidates,
                                  unsigned k, BasisIndex T, CandidateEncoding encoding, OracleMode mode);

struct PaeOptions {
    unsigned qubit_cap = kDefaultQubitCap;
    OracleMode oracle_mode = OracleMode::Diagonal;
    /// Default: Plain for k = 1, Indexed otherwise.
    std::optional<CandidateEncoding> encoding;
};

template <typename Scalar = double> struct PaeState {
    Statevector<Scalar> state;
    QarmRegisters registers;
    std::vector<Itemset> candidates;
    CandidateEncoding encoding;
    unsigned k = 0;
    BasisIndex T = 0;
    std::size_t n_transactions = 0;

    /// Candidate position named by a joint readout value (estimation bits
    /// excluded), or nullopt for a pattern that names no candidate.
    std::optional<std::size_t> candidate_of(BasisIndex joint_without_estimation) const {
        auto it = readout_to_candidate.find(joint_without_estimation);
        if (it == readout_to_candidate.end()) return std::nullopt;
        return it->second;
    }

    std::map<BasisIndex, std::size_t> readout_to_candidate;
};

/// Joint item-register value of an itemset; item l occupies bits [l m, (l+1) m).
inline BasisIndex pack_items(const Itemset &x, unsigned item_width) {
    BasisIndex v = 0;
    for (std::size_t l = 0; l < x.size(); ++l) v |= BasisIndex{x[l]} << (l * item_width);
    return v;
}

/**
 * One application of ((2|X_N><X_N| - I) (x) I) O^(k): the phase oracle,
 * then reflection about the uniform state over the first N transactions.
 */
template <typename Scalar>
void apply_grover_operator(Statevector<Scalar> &state, const OracleTable &table, const QarmRegisters &regs,
                           QueryCounter &counter, OracleMode mode, Controls controls = {}) {
    apply_phase_oracle_k(state, table, regs.oracle(), counter, mode, controls);
    reflect_about_uniform(state, regs.transaction, table.n_transactions(), controls);
    ++counter.grover_applications;
}

namespace detail {
void validate_candidates(const TransactionDB &db, std::span<const Itemset> candidates, unsigned k);
}

/**
 * Prepares |T-uniform>|X_N>|candidates>, applies sum_y |y><y| (x) G^y with
 * one controlled G^(2^p) per estimation qubit p, then the inverse Fourier
 * transform on the estimation register. Uses exactly T - 1 Grover
 * applications.
 */
template <typename Scalar = double>
PaeState<Scalar> parallel_amplitude_estimation(const TransactionDB &db, std::span<const Itemset> candidates,
                                               unsigned k, BasisIndex T, QueryCounter &counter,
                                               const PaeOptions &options = {}) {
    if (!is_power_of_two(T) || T < 2) throw std::invalid_argument("T must be a power of two >= 2");
    detail::validate_candidates(db, candidates, k);
    const auto encoding = options.encoding.value_or(k == 1 ? CandidateEncoding::Plain : CandidateEncoding::Indexed);
    auto regs = plan_qarm_registers(db.n_transactions(), db.n_items(), candidates.size(), k, T, encoding,
                                    options.oracle_mode);
    if (regs.layout.qubits() > options.qubit_cap) throw QubitCapExceeded(regs.layout.qubits(), options.qubit_cap);

    const OracleTable table(db);
    Statevector<Scalar> state(regs.layout, options.qubit_cap);
    prepare_uniform(state, regs.estimation, T);
    prepare_uniform(state, regs.transaction, db.n_transactions());

    const unsigned item_width = regs.items.front().width;
    std::map<BasisIndex, std::size_t> lookup;
    std::vector<Register> loaded;
    if (regs.index) loaded.push_back(*regs.index);
    loaded.insert(loaded.end(), regs.items.begin(), regs.items.end());
    typename Statevector<Scalar>::Vector amps =
        Statevector<Scalar>::Vector::Zero(static_cast<Eigen::Index>(detail::joint_dim(loaded)));
    const Scalar amp = Scalar(1) / std::sqrt(static_cast<Scalar>(candidates.size()));
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        BasisIndex v = pack_items(candidates[c], item_width);
        if (regs.index) v = c | (v << regs.index->width);
        amps(static_cast<Eigen::Index>(v)) = amp;
        lookup[v] = c;
    }
    inject_state(state, std::span<const Register>(loaded), amps);
    if (regs.kickback) prepare_kickback(state, *regs.kickback);

    const BasisIndex target_mask = regs.oracle().support_mask();
    for (unsigned p = 0; p < regs.estimation.width; ++p) {
        apply_controlled_power(
            state, regs.estimation.qubit(p), target_mask,
            [&](Statevector<Scalar> &s, Controls c) { apply_grover_operator(s, table, regs, counter, options.oracle_mode, c); },
            p);
    }
    inverse_qft(state, regs.estimation);

    PaeState<Scalar> out{std::move(state), std::move(regs), std::vector<Itemset>(candidates.begin(), candidates.end()),
                         encoding, k, T, db.n_transactions(), std::move(lookup)};
    return out;
}

} // namespace qarm
