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

#include "qarm/oracle.hpp"

#include <gtest/gtest.h>

namespace qarm {
namespace {

using Vector = StatevectorXd::Vector;

TransactionDB toy() { return TransactionDB::from_dense({{1, 1, 1}, {1, 1, 0}, {1, 0, 0}, {0, 0, 0}}); }

struct Fixture {
    StatevectorXd state;
    OracleRegisters regs;
};

// Transaction and k item registers, k data ancillas and a kickback qubit.
Fixture make_fixture(std::size_t n, std::size_t m, unsigned k) {
    RegisterLayout layout;
    OracleRegisters regs;
    regs.transaction = layout.add("transaction", register_width_for(n));
    for (unsigned l = 0; l < k; ++l) regs.items.push_back(layout.add("item" + std::to_string(l), register_width_for(m)));
    for (unsigned l = 0; l < k; ++l) regs.ancillas.push_back(layout.add("ancilla" + std::to_string(l), 1).offset);
    regs.kickback = layout.add("kickback", 1).offset;
    return {StatevectorXd(layout), regs};
}

BasisIndex basis(const OracleRegisters &regs, BasisIndex i, std::initializer_list<BasisIndex> items) {
    BasisIndex b = regs.transaction.place(i);
    std::size_t l = 0;
    for (BasisIndex j : items) b |= regs.items[l++].place(j);
    return b;
}

void load_basis(Fixture &f, BasisIndex b) {
    for (unsigned q = 0; q < f.state.qubits(); ++q)
        if (b >> q & 1) apply_x(f.state, q);
    prepare_kickback(f.state, *f.regs.kickback);
}

void load_random(Fixture &f, Rng &rng) {
    std::vector<Register> data{f.regs.transaction};
    data.insert(data.end(), f.regs.items.begin(), f.regs.items.end());
    Vector amps(static_cast<Eigen::Index>(detail::joint_dim(data)));
    for (Eigen::Index v = 0; v < amps.size(); ++v) amps(v) = {rng.uniform() - 0.5, rng.uniform() - 0.5};
    amps.normalize();
    inject_state(f.state, std::span<const Register>(data), amps);
    prepare_kickback(f.state, *f.regs.kickback);
}

// Sign of the kickback-|-> component on basis b with data ancillas zero.
std::complex<double> kicked_amplitude(const Fixture &f, BasisIndex b) {
    return f.state[b] - f.state[b | (BasisIndex{1} << *f.regs.kickback)];
}

TEST(BasicOracle, ToyExamples) {
    const auto db = toy();
    const OracleTable table(db);
    RegisterLayout layout;
    const auto i = layout.add("i", 2);
    const auto j = layout.add("j", 2);
    const auto a = layout.add("a", 1);
    QueryCounter counter;

    StatevectorXd s(layout);
    apply_x(s, j.qubit(0)); // |0>|1>|0>
    apply_basic_oracle(s, table, i, j, a.offset, counter);
    EXPECT_EQ(std::abs(s[i.place(0) | j.place(1) | a.place(1)]), 1.0);

    StatevectorXd t(layout);
    apply_x(t, i.qubit(0));
    apply_x(t, i.qubit(1)); // |3>|0>|0>
    apply_basic_oracle(t, table, i, j, a.offset, counter);
    EXPECT_EQ(std::abs(t[i.place(3)]), 1.0);
    EXPECT_EQ(counter.basic_oracle_calls, 2u);
}

TEST(BasicOracle, InvolutionAndOutOfDomainReadsZero) {
    const auto db = toy();
    const OracleTable table(db);
    EXPECT_FALSE(table.bit(0, 3));
    EXPECT_FALSE(table.bit(7, 0));
    RegisterLayout layout;
    const auto i = layout.add("i", 3);
    const auto j = layout.add("j", 2);
    const auto a = layout.add("a", 1);
    Rng rng(1);
    StatevectorXd s(layout);
    Vector v(s.dim());
    for (Eigen::Index x = 0; x < v.size(); ++x) v(x) = {rng.uniform(), rng.uniform()};
    s.amplitudes() = v.normalized();
    const auto before = s.amplitudes();
    QueryCounter counter;
    apply_basic_oracle(s, table, i, j, a.offset, counter);
    // Padding rows and the padding column are never flipped.
    for (BasisIndex b = 0; b < s.dim(); ++b)
        if (i.value(b) >= 4 || j.value(b) >= 3) EXPECT_EQ(s[b], before(static_cast<Eigen::Index>(b)));
    apply_basic_oracle(s, table, i, j, a.offset, counter);
    EXPECT_EQ(s.amplitudes(), before);
}

TEST(PhaseOracle, ToyPairExamples) {
    const auto db = toy();
    const OracleTable table(db);
    for (auto [row, expected_sign] : {std::pair<BasisIndex, double>{0, -1.0}, {2, 1.0}}) {
        auto f = make_fixture(4, 3, 2);
        const BasisIndex b = basis(f.regs, row, {0, 1});
        load_basis(f, b);
        const auto before = kicked_amplitude(f, b);
        QueryCounter counter;
        apply_phase_oracle_k(f.state, table, f.regs, counter, OracleMode::Circuit);
        EXPECT_NEAR(std::abs(kicked_amplitude(f, b) - expected_sign * before), 0, 1e-14);
        EXPECT_EQ(counter.basic_oracle_calls, 4u);
        EXPECT_EQ(counter.phase_oracle_k_calls, 1u);
    }
}

TEST(PhaseOracle, CircuitEqualsDiagonalOnRandomDatabases) {
    Rng rng(21);
    for (int trial = 0; trial < 20; ++trial) {
        const auto db = random_db(8, 4, 0.6, rng.next());
        const OracleTable table(db);
        for (unsigned k = 1; k <= 3; ++k) {
            auto circuit = make_fixture(8, 4, k);
            load_random(circuit, rng);
            auto diagonal = circuit;
            auto brute = circuit;
            QueryCounter c1, c2;
            apply_phase_oracle_k(circuit.state, table, circuit.regs, c1, OracleMode::Circuit);
            apply_phase_oracle_k(diagonal.state, table, diagonal.regs, c2, OracleMode::Diagonal);
            for (BasisIndex b = 0; b < brute.state.dim(); ++b) {
                bool tau = true;
                for (const auto &r : brute.regs.items)
                    tau = tau && db.contains(brute.regs.transaction.value(b), r.value(b));
                if (tau) brute.state[b] = -brute.state[b];
            }
            EXPECT_LT((circuit.state.amplitudes() - brute.state.amplitudes()).cwiseAbs().maxCoeff(), 1e-12);
            EXPECT_LT((circuit.state.amplitudes() - diagonal.state.amplitudes()).cwiseAbs().maxCoeff(), 1e-12);
            EXPECT_EQ(c1.basic_oracle_calls, 2 * k * c1.phase_oracle_k_calls);
            EXPECT_EQ(c1.basic_oracle_calls, c2.basic_oracle_calls);
        }
    }
}

TEST(PhaseOracle, RestoresAncillasAndIsInvolutiveAndDiagonal) {
    Rng rng(22);
    const auto db = random_db(6, 5, 0.5, 4);
    const OracleTable table(db);
    auto f = make_fixture(6, 5, 2);
    load_random(f, rng);
    const auto before = f.state.amplitudes();
    QueryCounter counter;
    apply_phase_oracle_k(f.state, table, f.regs, counter, OracleMode::Circuit);
    EXPECT_NO_THROW(check_oracle_ancillas(f.state, f.regs));
    BasisIndex amask = 0;
    for (unsigned q : f.regs.ancillas) amask |= BasisIndex{1} << q;
    EXPECT_LT(detail::weight_off_zero(f.state, amask), 1e-24);
    for (BasisIndex b = 0; b < f.state.dim(); ++b)
        EXPECT_NEAR(std::abs(f.state[b]), std::abs(before(static_cast<Eigen::Index>(b))), 1e-15);
    apply_phase_oracle_k(f.state, table, f.regs, counter, OracleMode::Circuit);
    EXPECT_LT((f.state.amplitudes() - before).norm(), 1e-12);
}

TEST(PhaseOracle, RejectsDirtyAncillas) {
    const auto db = toy();
    const OracleTable table(db);
    auto f = make_fixture(4, 3, 1);
    apply_x(f.state, f.regs.ancillas[0]);
    prepare_kickback(f.state, *f.regs.kickback);
    QueryCounter counter;
    EXPECT_THROW(apply_phase_oracle_k(f.state, table, f.regs, counter, OracleMode::Circuit), StateError);
    auto g = make_fixture(4, 3, 1); // kickback left in |0>
    EXPECT_THROW(apply_phase_oracle_k(g.state, table, g.regs, counter, OracleMode::Circuit), StateError);
}

TEST(PhaseOracle, KOneMatchesBasicOracleKickback) {
    // Writing D_ij straight into a |-> qubit is the other construction of O^(1).
    Rng rng(23);
    const auto db = random_db(5, 6, 0.5, 7);
    const OracleTable table(db);
    auto circuit = make_fixture(5, 6, 1);
    load_random(circuit, rng);
    auto direct = circuit;
    QueryCounter c1, c2;
    apply_phase_oracle_k(circuit.state, table, circuit.regs, c1, OracleMode::Circuit);
    apply_basic_oracle(direct.state, table, direct.regs.transaction, direct.regs.items[0], *direct.regs.kickback, c2);
    EXPECT_LT((circuit.state.amplitudes() - direct.state.amplitudes()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(PhaseOracle, DuplicateItemRegistersActAsOneItem) {
    const auto db = toy();
    const OracleTable table(db);
    for (BasisIndex row = 0; row < 4; ++row) {
        auto f = make_fixture(4, 3, 2);
        const BasisIndex b = basis(f.regs, row, {1, 1});
        load_basis(f, b);
        const auto before = kicked_amplitude(f, b);
        QueryCounter counter;
        apply_phase_oracle_k(f.state, table, f.regs, counter, OracleMode::Circuit);
        const double sign = db.contains(row, 1) ? -1.0 : 1.0;
        EXPECT_NEAR(std::abs(kicked_amplitude(f, b) - sign * before), 0, 1e-14);
    }
}

TEST(GeneralizedCnot, TruthTable) {
    RegisterLayout layout;
    layout.add("c", 2);
    layout.add("t", 1);
    const std::vector<unsigned> controls{0, 1};
    QueryCounter counter;
    for (BasisIndex c = 0; c < 4; ++c) {
        StatevectorXd s(layout);
        if (c & 1) apply_x(s, 0);
        if (c & 2) apply_x(s, 1);
        generalized_cnot(s, std::span<const unsigned>(controls), 2, counter);
        const BasisIndex expected = c | (c == 3 ? 4u : 0u);
        EXPECT_EQ(std::abs(s[expected]), 1.0);
    }
    EXPECT_EQ(counter.generalized_cnot_gates, 4u * 3u);
}

TEST(GeneralizedCnot, SingleControlIsCnot) {
    RegisterLayout layout;
    layout.add("c", 1);
    layout.add("t", 1);
    StatevectorXd s(layout), ref(layout);
    apply_h(s, 0);
    apply_h(ref, 0);
    const std::vector<unsigned> controls{0};
    QueryCounter counter;
    generalized_cnot(s, std::span<const unsigned>(controls), 1, counter);
    apply_x(ref, 1, Controls::on(0));
    EXPECT_EQ(s.amplitudes(), ref.amplitudes());
    EXPECT_EQ(counter.generalized_cnot_gates, 1u);
}

TEST(GeneralizedCnot, RejectsOverlap) {
    RegisterLayout layout;
    layout.add("c", 2);
    StatevectorXd s(layout);
    const std::vector<unsigned> controls{0, 1};
    QueryCounter counter;
    EXPECT_THROW(generalized_cnot(s, std::span<const unsigned>(controls), 1, counter), LayoutError);
}

} // namespace
} // namespace qarm
