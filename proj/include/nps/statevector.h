// Copyright 2026 The nps Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef NPS_STATEVECTOR_H
#define NPS_STATEVECTOR_H

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

namespace nps {

using Complex = std::complex<double>;

/// Thrown when a register would exceed the simulable qubit budget.
class CapacityError : public std::length_error {
   public:
    using std::length_error::length_error;
};

/// Dense 2x2 complex matrix, row-major.
struct Gate2x2 {
    std::array<Complex, 4> m{};

    constexpr Gate2x2() = default;
    constexpr Gate2x2(Complex a, Complex b, Complex c, Complex d) : m{a, b, c, d} {
    }

    Complex operator()(std::size_t row, std::size_t col) const {
        return m[2 * row + col];
    }
    Complex &operator()(std::size_t row, std::size_t col) {
        return m[2 * row + col];
    }

    Gate2x2 adjoint() const;
    /// Max-abs entry of G G^dagger - I.
    double unitarity_residual() const;

    static Gate2x2 identity();
};

Gate2x2 operator*(const Gate2x2 &a, const Gate2x2 &b);
Gate2x2 operator*(Complex s, const Gate2x2 &g);
Gate2x2 operator+(const Gate2x2 &a, const Gate2x2 &b);
Gate2x2 operator-(const Gate2x2 &a, const Gate2x2 &b);
double max_abs_diff(const Gate2x2 &a, const Gate2x2 &b);

namespace gates {
Gate2x2 I();
Gate2x2 X();
Gate2x2 Y();
Gate2x2 Z();
Gate2x2 H();
}  // namespace gates

/// One factor of a tensor-product operator.
struct QubitOp {
    std::size_t qubit;
    Gate2x2 gate;
};

/// Tensor product of single-qubit factors on distinct qubits.
using OperatorString = std::vector<QubitOp>;

/// Deterministic random stream for one trial.
///
/// The engine is std::mt19937_64 seeded with
///   splitmix64(splitmix64(master_seed) ^ splitmix64(stream_index + 0x9E3779B97F4A7C15)).
/// Uniform doubles take the top 53 bits of each draw, so the sequence is identical on
/// every conforming standard library and does not depend on thread scheduling.
class RngStream {
   public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_index);

    std::uint64_t master_seed() const {
        return master_seed_;
    }
    std::uint64_t stream_index() const {
        return stream_index_;
    }

    std::uint64_t next_u64();
    /// Uniform in [0, 1).
    double uniform();

   private:
    std::uint64_t master_seed_;
    std::uint64_t stream_index_;
    std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Dense statevector over n qubits. Qubit q addresses bit q of the amplitude index.
///
/// Every mutating operation keeps the L2 norm at 1; projections renormalize explicitly.
class StateVector {
   public:
    static constexpr std::size_t kMaxQubits = 26;
    /// Branch probabilities below this are treated as exactly zero.
    static constexpr double kZeroProbability = 1e-14;

    /// |0...0> on n qubits.
    static StateVector ground(std::size_t num_qubits);
    /// Normalizes the given amplitudes; throws on zero norm or non power-of-two length.
    static StateVector from_amplitudes(std::vector<Complex> amplitudes);
    /// Product state with `low` on the low qubits and `high` above them.
    static StateVector tensor(const StateVector &low, const StateVector &high);

    std::size_t num_qubits() const {
        return num_qubits_;
    }
    std::size_t dimension() const {
        return amplitudes_.size();
    }
    std::span<const Complex> amplitudes() const {
        return amplitudes_;
    }
    Complex amplitude(std::size_t index) const {
        return amplitudes_.at(index);
    }

    void apply(const Gate2x2 &gate, std::size_t qubit);
    void apply_controlled(const Gate2x2 &gate, std::size_t control, std::size_t target);
    void apply_string(std::span<const QubitOp> ops);

    /// Probability that measuring `qubit` yields 1.
    double probability_one(std::size_t qubit) const;
    /// Born-rule measurement of `qubit`; projects and renormalizes.
    int measure(std::size_t qubit, RngStream &rng);
    /// Projects `qubit` onto `bit` and renormalizes. Returns the branch probability.
    /// Throws std::logic_error when the branch has zero probability.
    double project(std::size_t qubit, int bit);

    /// <psi| O |psi> for a tensor-product operator.
    Complex expectation(std::span<const QubitOp> ops) const;
    /// Projects onto the `sign` eigenspace of an involutory operator string,
    /// i.e. applies (I + sign*O)/2 and renormalizes. Returns the branch probability.
    double project_onto(std::span<const QubitOp> ops, int sign);

    /// <this|other>.
    Complex inner(const StateVector &other) const;
    /// <this (x) |0..0>_high | other> where `other` has at least as many qubits as this.
    Complex inner_embedded(const StateVector &other) const;

    double norm() const;

    /// One line per basis index: `index re im`, 17 significant digits.
    void write_text(std::ostream &out) const;

   private:
    explicit StateVector(std::size_t num_qubits);

    void check_qubit(std::size_t qubit) const;
    void renormalize();

    std::size_t num_qubits_;
    std::vector<Complex> amplitudes_;
};

/// |<a|b>|^2.
double fidelity(const StateVector &a, const StateVector &b);

/// Fidelity for 2-component logical amplitude vectors (need not be normalized).
double fidelity(std::array<Complex, 2> a, std::array<Complex, 2> b);

}  // namespace nps

#endif
