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
 * Database oracles and query accounting.
 *
 * The basic oracle O maps |i>|j>|a> to |i>|j>|a xor D(i,j)>. The k-itemset
 * phase oracle flips the sign of |i>|j_1..j_k> when transaction i holds all
 * k items. It is built from 2k basic-oracle calls around a k-controlled NOT
 * onto a kickback qubit prepared in |->, or, in diagonal mode, applied as
 * the equivalent sign pattern with the same query charge.
 */
#pragma once

#include "qarm/data.hpp"
#include "qarm/qsim.hpp"

#include <optional>

namespace qarm {

struct QueryCounter {
    std::uint64_t basic_oracle_calls = 0;
    std::uint64_t phase_oracle_k_calls = 0;
    std::uint64_t grover_applications = 0;
    std::uint64_t amplification_iterations = 0;
    std::uint64_t measurements = 0;
    std::uint64_t classical_row_scans = 0;
    /// Elementary gates spent in k-controlled NOTs, 2k-1 per gate.
    std::uint64_t generalized_cnot_gates = 0;

    QueryCounter &operator+=(const QueryCounter &o) {
        basic_oracle_calls += o.basic_oracle_calls;
        phase_oracle_k_calls += o.phase_oracle_k_calls;
        grover_applications += o.grover_applications;
        amplification_iterations += o.amplification_iterations;
        measurements += o.measurements;
        classical_row_scans += o.classical_row_scans;
        generalized_cnot_gates += o.generalized_cnot_gates;
        return *this;
    }
    friend bool operator==(const QueryCounter &, const QueryCounter &) = default;
};

enum class OracleMode {
    /// Basic oracles, generalized CNOT and uncomputation on explicit ancillas.
    Circuit,
    /// Direct sign flip; charges the counter exactly as Circuit does.
    Diagonal,
};

/**
 * Dense lookup of D for simulation. Rows >= N and columns >= M read as 0,
 * so padding states of power-of-two registers are never marked.
 */
class OracleTable {
  public:
    static constexpr std::size_t kMaxEntries = std::size_t{1} << 26;

    explicit OracleTable(const TransactionDB &db) : n_(db.n_transactions()), m_(db.n_items()) {
        if (n_ * m_ > kMaxEntries) throw std::invalid_argument("database too large for oracle simulation");
        bits_.assign(n_ * m_, 0);
        for (RowId i = 0; i < n_; ++i)
            for (ItemId j : db.row(i)) bits_[i * m_ + j] = 1;
    }

    bool bit(BasisIndex i, BasisIndex j) const {
        return i < n_ && j < m_ && bits_[static_cast<std::size_t>(i * m_ + j)];
    }
    std::size_t n_transactions() const { return n_; }
    std::size_t n_items() const { return m_; }

  private:
    std::size_t n_;
    std::size_t m_;
    std::vector<std::uint8_t> bits_;
};

/// Registers the k-itemset phase oracle acts on.
struct OracleRegisters {
    Register transaction;
    std::vector<Register> items;
    /// Circuit mode only: k data ancillas and the |-> kickback qubit.
    std::vector<unsigned> ancillas;
    std::optional<unsigned> kickback;

    BasisIndex support_mask() const {
        BasisIndex m = transaction.mask();
        for (const auto &r : items) m |= r.mask();
        for (unsigned q : ancillas) m |= BasisIndex{1} << q;
        if (kickback) m |= BasisIndex{1} << *kickback;
        return m;
    }
};

template <typename Scalar>
void apply_basic_oracle(Statevector<Scalar> &state, const OracleTable &table, const Register &i_reg,
                        const Register &j_reg, unsigned a_qubit, QueryCounter &counter,
                        Controls controls = {}) {
    detail::check_register(state, i_reg);
    detail::check_register(state, j_reg);
    detail::check_qubit(state, a_qubit);
    const BasisIndex abit = BasisIndex{1} << a_qubit;
    if ((i_reg.mask() & j_reg.mask()) || ((i_reg.mask() | j_reg.mask()) & abit) ||
        (controls.mask & (i_reg.mask() | j_reg.mask() | abit)))
        throw LayoutError("basic oracle registers overlap");
    for (BasisIndex b = 0; b < state.dim(); ++b) {
        if ((b & abit) || !controls.active(b)) continue;
        if (table.bit(i_reg.value(b), j_reg.value(b))) std::swap(state[b], state[b | abit]);
    }
    ++counter.basic_oracle_calls;
}

/// target ^= AND of controls (the k-controlled NOT).
template <typename Scalar>
void generalized_cnot(Statevector<Scalar> &state, std::span<const unsigned> control_qubits, unsigned target,
                      QueryCounter &counter, Controls extra = {}) {
    BasisIndex cmask = 0;
    for (unsigned q : control_qubits) {
        detail::check_qubit(state, q);
        cmask |= BasisIndex{1} << q;
    }
    detail::check_qubit(state, target);
    const BasisIndex tbit = BasisIndex{1} << target;
    if (cmask & tbit || extra.mask & tbit) throw LayoutError("generalized CNOT target overlaps a control");
    const Controls all{cmask | extra.mask};
    for (BasisIndex b = 0; b < state.dim(); ++b)
        if (!(b & tbit) && all.active(b)) std::swap(state[b], state[b | tbit]);
    counter.generalized_cnot_gates += 2 * control_qubits.size() - 1;
}

/// Puts a |0> qubit into (|0> - |1>)/sqrt(2).
template <typename Scalar> void prepare_kickback(Statevector<Scalar> &state, unsigned qubit) {
    apply_x(state, qubit);
    apply_h(state, qubit);
}

/// Throws StateError unless the data ancillas are |0> and the kickback qubit is |->.
template <typename Scalar>
void check_oracle_ancillas(const Statevector<Scalar> &state, const OracleRegisters &regs) {
    BasisIndex amask = 0;
    for (unsigned q : regs.ancillas) amask |= BasisIndex{1} << q;
    if (detail::weight_off_zero(state, amask) > tolerance::kNorm)
        throw StateError("oracle data ancillas are not in |0>");
    if (!regs.kickback) throw StateError("circuit oracle needs a kickback qubit");
    const BasisIndex kbit = BasisIndex{1} << *regs.kickback;
    double plus_weight = 0;
    for (BasisIndex b = 0; b < state.dim(); ++b)
        if (!(b & kbit)) plus_weight += std::norm(state[b] + state[b | kbit]);
    if (plus_weight > tolerance::kNorm) throw StateError("oracle kickback qubit is not in |->");
}

/// True iff transaction i holds every item named by the item registers at b.
template <typename Registers>
bool itemset_in_transaction(const OracleTable &table, const Registers &regs, BasisIndex b) {
    const BasisIndex i = regs.transaction.value(b);
    for (const auto &r : regs.items)
        if (!table.bit(i, r.value(b))) return false;
    return true;
}

/**
 * |i>|j_1..j_k> -> (-1)^{D(i,j_1)...D(i,j_k)} |i>|j_1..j_k>.
 * Charges 2k basic-oracle calls and one phase-oracle call in either mode.
 */
template <typename Scalar>
void apply_phase_oracle_k(Statevector<Scalar> &state, const OracleTable &table, const OracleRegisters &regs,
                          QueryCounter &counter, OracleMode mode, Controls controls = {}) {
    const std::size_t k = regs.items.size();
    if (k == 0) throw LayoutError("phase oracle needs at least one item register");
    if (controls.mask & regs.support_mask()) throw LayoutError("control overlaps oracle registers");

    if (mode == OracleMode::Circuit) {
        if (regs.ancillas.size() != k) throw LayoutError("circuit oracle needs k data ancillas");
        check_oracle_ancillas(state, regs);
        for (std::size_t l = 0; l < k; ++l)
            apply_basic_oracle(state, table, regs.transaction, regs.items[l], regs.ancillas[l], counter, controls);
        generalized_cnot(state, std::span<const unsigned>(regs.ancillas), *regs.kickback, counter, controls);
        for (std::size_t l = k; l-- > 0;)
            apply_basic_oracle(state, table, regs.transaction, regs.items[l], regs.ancillas[l], counter, controls);
    } else {
        detail::check_register(state, regs.transaction);
        for (const auto &r : regs.items) detail::check_register(state, r);
        for (BasisIndex b = 0; b < state.dim(); ++b)
            if (controls.active(b) && itemset_in_transaction(table, regs, b)) state[b] = -state[b];
        counter.basic_oracle_calls += 2 * k;
    }
    ++counter.phase_oracle_k_calls;
}

} // namespace qarm
