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

#include "qarm/qpe.hpp"

#include <cmath>
#include <numbers>
#include <set>

namespace qarm {

namespace {
constexpr double kPi = std::numbers::pi;

void check_support(double s) {
    if (!(s >= 0.0 && s <= 1.0)) throw std::invalid_argument("support must lie in [0, 1]");
}
} // namespace

GroverSpectrum grover_spectrum(double support) {
    check_support(support);
    return {std::asin(std::sqrt(support)), support, support == 0.0 || support == 1.0};
}

double phase_kernel(double t_omega, BasisIndex y, BasisIndex T) {
    const double nearest = std::round(t_omega);
    if (std::abs(t_omega - nearest) < 1e-12) {
        const auto snapped = static_cast<std::int64_t>(nearest);
        const auto Ti = static_cast<std::int64_t>(T);
        return static_cast<BasisIndex>(((snapped % Ti) + Ti) % Ti) == y ? 1.0 : 0.0;
    }
    const double d = t_omega - static_cast<double>(y);
    const double num = std::sin(kPi * d);
    const double den = static_cast<double>(T) * std::sin(kPi * d / static_cast<double>(T));
    return (num * num) / (den * den);
}

PhaseDistribution analytic_phase_distribution(double support, BasisIndex T) {
    check_support(support);
    if (!is_power_of_two(T)) throw std::invalid_argument("T must be a power of two");
    PhaseDistribution dist{std::vector<double>(T, 0.0)};
    if (support == 0.0) {
        dist.probability[0] = 1.0;
        return dist;
    }
    if (support == 1.0) {
        dist.probability[T / 2] = 1.0;
        return dist;
    }
    const double t_omega = static_cast<double>(T) * std::asin(std::sqrt(support)) / kPi;
    const double t_mirror = static_cast<double>(T) - t_omega;
    for (BasisIndex y = 0; y < T; ++y)
        dist.probability[y] = 0.5 * phase_kernel(t_omega, y, T) + 0.5 * phase_kernel(t_mirror, y, T);
    return dist;
}

double total_variation(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) throw std::invalid_argument("distributions differ in size");
    double tv = 0;
    for (std::size_t i = 0; i < p.size(); ++i) tv += std::abs(p[i] - q[i]);
    return tv / 2;
}

SupportEstimate decode_support(BasisIndex y, BasisIndex T) {
    if (T == 0 || y >= T) throw std::invalid_argument("grid index out of range");
    const BasisIndex canonical = std::min(y, T - y);
    const double s = std::sin(kPi * static_cast<double>(canonical) / static_cast<double>(T));
    return {canonical, T, s * s};
}

QarmRegisters plan_qarm_registers(std::size_t n_transactions, std::size_t n_items, std::size_t n_candidates,
                                  unsigned k, BasisIndex T, CandidateEncoding encoding, OracleMode mode) {
    if (!is_power_of_two(T) || T < 2) throw std::invalid_argument("T must be a power of two >= 2");
    if (k == 0) throw std::invalid_argument("k must be positive");
    QarmRegisters regs;
    unsigned t = 0;
    while ((BasisIndex{1} << t) < T) ++t;
    regs.estimation = regs.layout.add("estimation", t);
    regs.transaction = regs.layout.add("transaction", register_width_for(n_transactions));
    if (encoding == CandidateEncoding::Indexed)
        regs.index = regs.layout.add("index", register_width_for(n_candidates));
    const unsigned m = register_width_for(n_items);
    for (unsigned l = 0; l < k; ++l) regs.items.push_back(regs.layout.add("item" + std::to_string(l), m));
    if (mode == OracleMode::Circuit) {
        const auto anc = regs.layout.add("ancilla", k);
        for (unsigned l = 0; l < k; ++l) regs.ancillas.push_back(anc.qubit(l));
        regs.kickback = regs.layout.add("kickback", 1).offset;
    }
    return regs;
}

namespace detail {

void validate_candidates(const TransactionDB &db, std::span<const Itemset> candidates, unsigned k) {
    if (candidates.empty()) throw std::invalid_argument("candidate list is empty");
    std::set<Itemset> seen;
    for (const auto &c : candidates) {
        if (c.size() != k) throw std::invalid_argument("candidate " + c.to_string() + " is not of size k");
        if (c.back() >= db.n_items()) throw std::out_of_range("candidate " + c.to_string() + " out of range");
        if (!seen.insert(c).second) throw std::invalid_argument("duplicate candidate " + c.to_string());
    }
}

} // namespace detail

} // namespace qarm
