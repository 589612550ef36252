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
 * Dense statevector engine over a named multi-register qubit layout.
 *
 * Qubit q is bit q of the basis index. A register of width w at offset o
 * occupies qubits o..o+w-1 with its least significant bit at o. Several
 * registers read together form a joint value with the first register in the
 * low bits.
 *
 * All kernels are free functions templated on the scalar type; amplitudes
 * live in an Eigen column vector.
 */
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qarm {

using BasisIndex = std::uint64_t;

namespace tolerance {
inline constexpr double kNorm = 1e-10;
inline constexpr double kUnitary = 1e-12;
} // namespace tolerance

inline constexpr unsigned kDefaultQubitCap = 26;

class LayoutError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

class StateError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class QubitCapExceeded : public std::runtime_error {
  public:
    QubitCapExceeded(unsigned required, unsigned cap)
        : std::runtime_error("simulation requires " + std::to_string(required) +
                             " qubits but the qubit cap is " + std::to_string(cap)),
          required_(required), cap_(cap) {}
    unsigned required() const { return required_; }
    unsigned cap() const { return cap_; }

  private:
    unsigned required_;
    unsigned cap_;
};

/// Smallest w >= 1 with 2^w >= n.
inline unsigned register_width_for(std::uint64_t n) {
    unsigned w = 1;
    while ((std::uint64_t{1} << w) < n) ++w;
    return w;
}

inline bool is_power_of_two(std::uint64_t x) { return x != 0 && (x & (x - 1)) == 0; }

struct Register {
    std::string name;
    unsigned offset = 0;
    unsigned width = 0;

    BasisIndex dim() const { return BasisIndex{1} << width; }
    BasisIndex mask() const { return (dim() - 1) << offset; }
    BasisIndex value(BasisIndex basis) const { return (basis >> offset) & (dim() - 1); }
    BasisIndex place(BasisIndex v) const { return v << offset; }
    unsigned qubit(unsigned bit) const { return offset + bit; }

    friend bool operator==(const Register &, const Register &) = default;
};

/// Registers packed back to back from qubit 0, in insertion order.
class RegisterLayout {
  public:
    Register add(std::string name, unsigned width) {
        if (width == 0) throw LayoutError("register '" + name + "' has zero width");
        if (has(name)) throw LayoutError("duplicate register name '" + name + "'");
        Register r{std::move(name), qubits_, width};
        qubits_ += width;
        registers_.push_back(r);
        return r;
    }

    bool has(std::string_view name) const {
        return std::any_of(registers_.begin(), registers_.end(),
                           [&](const Register &r) { return r.name == name; });
    }

    const Register &operator[](std::string_view name) const {
        for (const auto &r : registers_)
            if (r.name == name) return r;
        throw LayoutError("no register named '" + std::string(name) + "'");
    }

    unsigned qubits() const { return qubits_; }
    const std::vector<Register> &registers() const { return registers_; }

    friend bool operator==(const RegisterLayout &, const RegisterLayout &) = default;

  private:
    std::vector<Register> registers_;
    unsigned qubits_ = 0;
};

/// Restricts a kernel to basis states whose control qubits are all 1.
struct Controls {
    BasisIndex mask = 0;

    static Controls on(unsigned qubit) { return {BasisIndex{1} << qubit}; }
    bool active(BasisIndex basis) const { return (basis & mask) == mask; }
};

/**
 * Deterministic random stream. Uniform draws are built directly from the
 * 64-bit engine output so transcripts do not depend on the standard
 * library's distribution implementations.
 */
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : seed_(seed), state_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next() {
        // splitmix64
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform in [0, n).
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("Rng::below(0)");
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
        std::uint64_t x;
        do {
            x = next();
        } while (x >= limit);
        return x % n;
    }

    /// Index drawn from unnormalized non-negative weights.
    std::size_t pick(std::span<const double> weights) {
        double total = 0;
        for (double w : weights) total += w;
        if (!(total > 0)) throw StateError("cannot sample from an all-zero distribution");
        double u = uniform() * total;
        std::size_t last = 0;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            if (weights[i] <= 0) continue;
            last = i;
            if (u < weights[i]) return i;
            u -= weights[i];
        }
        return last;
    }

  private:
    std::uint64_t seed_;
    std::uint64_t state_;
};

template <typename Scalar> class Statevector {
  public:
    using Complex = std::complex<Scalar>;
    using Vector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;

    /// All qubits in |0>.
    explicit Statevector(RegisterLayout layout, unsigned qubit_cap = kDefaultQubitCap)
        : layout_(std::move(layout)) {
        if (layout_.qubits() > qubit_cap) throw QubitCapExceeded(layout_.qubits(), qubit_cap);
        amps_ = Vector::Zero(static_cast<Eigen::Index>(BasisIndex{1} << layout_.qubits()));
        amps_(0) = Complex(1);
    }

    const RegisterLayout &layout() const { return layout_; }
    const Register &reg(std::string_view name) const { return layout_[name]; }
    unsigned qubits() const { return layout_.qubits(); }
    BasisIndex dim() const { return static_cast<BasisIndex>(amps_.size()); }

    Vector &amplitudes() { return amps_; }
    const Vector &amplitudes() const { return amps_; }
    Complex &operator[](BasisIndex b) { return amps_(static_cast<Eigen::Index>(b)); }
    const Complex &operator[](BasisIndex b) const { return amps_(static_cast<Eigen::Index>(b)); }

    Scalar norm() const { return amps_.norm(); }

  private:
    RegisterLayout layout_;
    Vector amps_;
};

using StatevectorXd = Statevector<double>;

// ------------------------------------------------------------------ helpers

namespace detail {

inline BasisIndex registers_mask(std::span<const Register> regs) {
    BasisIndex m = 0;
    for (const auto &r : regs) {
        if (m & r.mask()) throw LayoutError("registers overlap");
        m |= r.mask();
    }
    return m;
}

inline BasisIndex joint_value(std::span<const Register> regs, BasisIndex basis) {
    BasisIndex v = 0;
    unsigned shift = 0;
    for (const auto &r : regs) {
        v |= r.value(basis) << shift;
        shift += r.width;
    }
    return v;
}

inline BasisIndex scatter(std::span<const Register> regs, BasisIndex joint) {
    BasisIndex b = 0;
    for (const auto &r : regs) {
        b |= r.place(joint & (r.dim() - 1));
        joint >>= r.width;
    }
    return b;
}

inline BasisIndex joint_dim(std::span<const Register> regs) {
    unsigned w = 0;
    for (const auto &r : regs) w += r.width;
    return BasisIndex{1} << w;
}

template <typename Scalar>
void check_register(const Statevector<Scalar> &state, const Register &r) {
    if (r.offset + r.width > state.qubits()) throw LayoutError("register '" + r.name + "' outside layout");
}

template <typename Scalar> void check_qubit(const Statevector<Scalar> &state, unsigned q) {
    if (q >= state.qubits()) throw LayoutError("qubit " + std::to_string(q) + " outside layout");
}

/// Weight of the state outside the all-zero pattern of mask.
template <typename Scalar> double weight_off_zero(const Statevector<Scalar> &state, BasisIndex mask) {
    double w = 0;
    for (BasisIndex b = 0; b < state.dim(); ++b)
        if (b & mask) w += std::norm(state[b]);
    return w;
}

/// In-place radix-2 DFT, out[j] = sum_i in[i] exp(sign * 2 pi i ij / n) / sqrt(n).
template <typename Complex> void unitary_dft(std::vector<Complex> &a, int sign) {
    using Real = typename Complex::value_type;
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const Real angle = sign * 2 * std::numbers::pi_v<Real> / static_cast<Real>(len);
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t q = 0; q < len / 2; ++q) {
                const Complex w = std::polar(Real(1), angle * static_cast<Real>(q));
                const Complex u = a[i + q];
                const Complex v = a[i + q + len / 2] * w;
                a[i + q] = u + v;
                a[i + q + len / 2] = u - v;
            }
        }
    }
    const Real scale = Real(1) / std::sqrt(static_cast<Real>(n));
    for (auto &x : a) x *= scale;
}

template <typename Scalar, typename Fn>
void for_each_slice(const Statevector<Scalar> &state, const Register &r, Controls controls, Fn &&fn) {
    if (controls.mask & r.mask()) throw LayoutError("control overlaps register '" + r.name + "'");
    for (BasisIndex b = 0; b < state.dim(); ++b) {
        if ((b & r.mask()) || !controls.active(b)) continue;
        fn(b);
    }
}

} // namespace detail

// ------------------------------------------------------------------ gates

template <typename Scalar>
void apply_single_qubit(Statevector<Scalar> &state, unsigned qubit,
                        const Eigen::Matrix<std::complex<Scalar>, 2, 2> &u, Controls controls = {}) {
    detail::check_qubit(state, qubit);
    const BasisIndex bit = BasisIndex{1} << qubit;
    if (controls.mask & bit) throw LayoutError("control overlaps target qubit");
    for (BasisIndex b = 0; b < state.dim(); ++b) {
        if ((b & bit) || !controls.active(b)) continue;
        const auto a0 = state[b];
        const auto a1 = state[b | bit];
        state[b] = u(0, 0) * a0 + u(0, 1) * a1;
        state[b | bit] = u(1, 0) * a0 + u(1, 1) * a1;
    }
}

template <typename Scalar>
void apply_x(Statevector<Scalar> &state, unsigned qubit, Controls controls = {}) {
    detail::check_qubit(state, qubit);
    const BasisIndex bit = BasisIndex{1} << qubit;
    if (controls.mask & bit) throw LayoutError("control overlaps target qubit");
    for (BasisIndex b = 0; b < state.dim(); ++b)
        if (!(b & bit) && controls.active(b)) std::swap(state[b], state[b | bit]);
}

template <typename Scalar>
void apply_h(Statevector<Scalar> &state, unsigned qubit, Controls controls = {}) {
    const Scalar r = Scalar(1) / std::sqrt(Scalar(2));
    Eigen::Matrix<std::complex<Scalar>, 2, 2> h;
    h << r, r, r, -r;
    apply_single_qubit(state, qubit, h, controls);
}

/**
 * Loads sum_{i<limit} |i>/sqrt(limit) into a register that is currently |0>.
 * limit need not be a power of two.
 */
template <typename Scalar>
void prepare_uniform(Statevector<Scalar> &state, const Register &r, BasisIndex limit) {
    detail::check_register(state, r);
    if (limit == 0 || limit > r.dim())
        throw LayoutError("uniform limit " + std::to_string(limit) + " does not fit register '" + r.name + "'");
    if (detail::weight_off_zero(state, r.mask()) > tolerance::kNorm)
        throw StateError("register '" + r.name + "' is not in |0>");
    const Scalar scale = Scalar(1) / std::sqrt(static_cast<Scalar>(limit));
    for (BasisIndex b = 0; b < state.dim(); ++b) {
        if (b & r.mask()) continue;
        const auto a = state[b] * scale;
        for (BasisIndex v = 0; v < limit; ++v) state[b | r.place(v)] = a;
    }
}

/// Loads a normalized joint superposition into registers that are |0>.
template <typename Scalar>
void inject_state(Statevector<Scalar> &state, std::span<const Register> regs,
                  const typename Statevector<Scalar>::Vector &amplitudes) {
    for (const auto &r : regs) detail::check_register(state, r);
    const BasisIndex mask = detail::registers_mask(regs);
    const BasisIndex dim = detail::joint_dim(regs);
    if (static_cast<BasisIndex>(amplitudes.size()) > dim)
        throw LayoutError("amplitude vector larger than the joint register space");
    if (std::abs(static_cast<double>(amplitudes.norm()) - 1.0) > tolerance::kNorm)
        throw StateError("injected amplitudes are not normalized");
    if (detail::weight_off_zero(state, mask) > tolerance::kNorm)
        throw StateError("target registers are not in |0>");

    std::vector<BasisIndex> support;
    for (Eigen::Index v = 0; v < amplitudes.size(); ++v)
        if (amplitudes(v) != std::complex<Scalar>(0)) support.push_back(static_cast<BasisIndex>(v));
    for (BasisIndex b = 0; b < state.dim(); ++b) {
        if (b & mask) continue;
        const auto a = state[b];
        state[b] = 0;
        for (BasisIndex v : support)
            state[b | detail::scatter(regs, v)] = a * amplitudes(static_cast<Eigen::Index>(v));
    }
}

template <typename Scalar>
void inject_state(Statevector<Scalar> &state, const Register &r,
                  const typename Statevector<Scalar>::Vector &amplitudes) {
    inject_state(state, std::span<const Register>(&r, 1), amplitudes);
}

/// Applies a dense dim x dim matrix to one register.
template <typename Scalar>
void apply_register_unitary(
    Statevector<Scalar> &state, const Register &r,
    const Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic> &u,
    Controls controls = {}) {
    detail::check_register(state, r);
    const auto d = static_cast<Eigen::Index>(r.dim());
    if (u.rows() != d || u.cols() != d) throw LayoutError("matrix does not match register dimension");
    typename Statevector<Scalar>::Vector x(d);
    detail::for_each_slice(state, r, controls, [&](BasisIndex b) {
        for (Eigen::Index v = 0; v < d; ++v) x(v) = state[b | r.place(static_cast<BasisIndex>(v))];
        const typename Statevector<Scalar>::Vector y = u * x;
        for (Eigen::Index v = 0; v < d; ++v) state[b | r.place(static_cast<BasisIndex>(v))] = y(v);
    });
}

/**
 * Applies op 2^power times, each time controlled on `control`. op is called
 * as op(state, controls) and must act only on qubits in target_mask.
 */
template <typename Scalar, typename Op>
void apply_controlled_power(Statevector<Scalar> &state, unsigned control, BasisIndex target_mask,
                            Op &&op, unsigned power) {
    detail::check_qubit(state, control);
    if (target_mask & (BasisIndex{1} << control))
        throw LayoutError("control qubit overlaps the controlled unitary's support");
    const Controls c = Controls::on(control);
    const std::uint64_t reps = std::uint64_t{1} << power;
    for (std::uint64_t rep = 0; rep < reps; ++rep) op(state, c);
}

/// F_T|i> = sum_j exp(2 pi i ij/T)|j>/sqrt(T) on one register.
template <typename Scalar>
void qft(Statevector<Scalar> &state, const Register &r, Controls controls = {}) {
    detail::check_register(state, r);
    std::vector<std::complex<Scalar>> slice(r.dim());
    detail::for_each_slice(state, r, controls, [&](BasisIndex b) {
        for (BasisIndex v = 0; v < r.dim(); ++v) slice[v] = state[b | r.place(v)];
        detail::unitary_dft(slice, +1);
        for (BasisIndex v = 0; v < r.dim(); ++v) state[b | r.place(v)] = slice[v];
    });
}

template <typename Scalar>
void inverse_qft(Statevector<Scalar> &state, const Register &r, Controls controls = {}) {
    detail::check_register(state, r);
    std::vector<std::complex<Scalar>> slice(r.dim());
    detail::for_each_slice(state, r, controls, [&](BasisIndex b) {
        for (BasisIndex v = 0; v < r.dim(); ++v) slice[v] = state[b | r.place(v)];
        detail::unitary_dft(slice, -1);
        for (BasisIndex v = 0; v < r.dim(); ++v) state[b | r.place(v)] = slice[v];
    });
}

/// state <- 2 <ref|state> ref - state.
template <typename Scalar>
void reflect_about_state(Statevector<Scalar> &state, const Statevector<Scalar> &reference) {
    if (!(state.layout() == reference.layout())) throw LayoutError("reference layout differs from state layout");
    if (std::abs(static_cast<double>(reference.norm()) - 1.0) > tolerance::kNorm)
        throw StateError("reference state is not normalized");
    const auto overlap = reference.amplitudes().dot(state.amplitudes());
    state.amplitudes() = (Scalar(2) * overlap) * reference.amplitudes() - state.amplitudes();
}

/**
 * Reflection 2|u><u| - I confined to one register, where |u> is the uniform
 * superposition over its first `limit` basis states.
 */
template <typename Scalar>
void reflect_about_uniform(Statevector<Scalar> &state, const Register &r, BasisIndex limit,
                           Controls controls = {}) {
    detail::check_register(state, r);
    if (limit == 0 || limit > r.dim()) throw LayoutError("uniform limit does not fit register");
    detail::for_each_slice(state, r, controls, [&](BasisIndex b) {
        std::complex<Scalar> sum = 0;
        for (BasisIndex v = 0; v < limit; ++v) sum += state[b | r.place(v)];
        const auto twice_mean = Scalar(2) * sum / static_cast<Scalar>(limit);
        for (BasisIndex v = 0; v < limit; ++v) {
            auto &a = state[b | r.place(v)];
            a = twice_mean - a;
        }
        for (BasisIndex v = limit; v < r.dim(); ++v) state[b | r.place(v)] = -state[b | r.place(v)];
    });
}

/// Born-rule marginal over the joint value of regs.
template <typename Scalar>
std::vector<double> marginal_probabilities(const Statevector<Scalar> &state, std::span<const Register> regs) {
    for (const auto &r : regs) detail::check_register(state, r);
    detail::registers_mask(regs);
    std::vector<double> p(detail::joint_dim(regs), 0.0);
    for (BasisIndex b = 0; b < state.dim(); ++b) {
        const double w = std::norm(state[b]);
        if (w != 0) p[detail::joint_value(regs, b)] += w;
    }
    return p;
}

template <typename Scalar>
std::vector<double> marginal_probabilities(const Statevector<Scalar> &state, const Register &r) {
    return marginal_probabilities(state, std::span<const Register>(&r, 1));
}

struct Measurement {
    /// One value per measured register, in the order given.
    std::vector<BasisIndex> values;
    double probability = 0;
};

/// Samples the joint value of regs and collapses the state onto it.
template <typename Scalar>
Measurement measure(Statevector<Scalar> &state, std::span<const Register> regs, Rng &rng) {
    const auto p = marginal_probabilities(state, regs);
    const BasisIndex joint = rng.pick(p);
    if (!(p[joint] > 1e-300)) throw StateError("measurement branch has zero norm");
    const Scalar scale = Scalar(1) / std::sqrt(static_cast<Scalar>(p[joint]));
    for (BasisIndex b = 0; b < state.dim(); ++b)
        state[b] = detail::joint_value(regs, b) == joint ? state[b] * scale : std::complex<Scalar>(0);

    Measurement m;
    m.probability = p[joint];
    BasisIndex rest = joint;
    for (const auto &r : regs) {
        m.values.push_back(rest & (r.dim() - 1));
        rest >>= r.width;
    }
    return m;
}

template <typename Scalar> Measurement measure(Statevector<Scalar> &state, const Register &r, Rng &rng) {
    return measure(state, std::span<const Register>(&r, 1), rng);
}

} // namespace qarm
