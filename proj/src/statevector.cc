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

#include "nps/statevector.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

namespace nps {

Gate2x2 Gate2x2::identity() {
    return {1, 0, 0, 1};
}

Gate2x2 Gate2x2::adjoint() const {
    return {std::conj(m[0]), std::conj(m[2]), std::conj(m[1]), std::conj(m[3])};
}

double Gate2x2::unitarity_residual() const {
    return max_abs_diff(*this * adjoint(), identity());
}

Gate2x2 operator*(const Gate2x2 &a, const Gate2x2 &b) {
    return {
        a.m[0] * b.m[0] + a.m[1] * b.m[2],
        a.m[0] * b.m[1] + a.m[1] * b.m[3],
        a.m[2] * b.m[0] + a.m[3] * b.m[2],
        a.m[2] * b.m[1] + a.m[3] * b.m[3],
    };
}

Gate2x2 operator*(Complex s, const Gate2x2 &g) {
    return {s * g.m[0], s * g.m[1], s * g.m[2], s * g.m[3]};
}

Gate2x2 operator+(const Gate2x2 &a, const Gate2x2 &b) {
    return {a.m[0] + b.m[0], a.m[1] + b.m[1], a.m[2] + b.m[2], a.m[3] + b.m[3]};
}

Gate2x2 operator-(const Gate2x2 &a, const Gate2x2 &b) {
    return {a.m[0] - b.m[0], a.m[1] - b.m[1], a.m[2] - b.m[2], a.m[3] - b.m[3]};
}

double max_abs_diff(const Gate2x2 &a, const Gate2x2 &b) {
    double r = 0;
    for (std::size_t k = 0; k < 4; k++) {
        r = std::max(r, std::abs(a.m[k] - b.m[k]));
    }
    return r;
}

namespace gates {
Gate2x2 I() {
    return Gate2x2::identity();
}
Gate2x2 X() {
    return {0, 1, 1, 0};
}
Gate2x2 Y() {
    return {0, Complex(0, -1), Complex(0, 1), 0};
}
Gate2x2 Z() {
    return {1, 0, 0, -1};
}
Gate2x2 H() {
    const double s = 1.0 / std::sqrt(2.0);
    return {s, s, s, -s};
}
}  // namespace gates

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
    : master_seed_(master_seed),
      stream_index_(stream_index),
      engine_(splitmix64(splitmix64(master_seed) ^ splitmix64(stream_index + 0x9E3779B97F4A7C15ULL))) {
}

std::uint64_t RngStream::next_u64() {
    return engine_();
}

double RngStream::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

StateVector::StateVector(std::size_t num_qubits) : num_qubits_(num_qubits) {
    if (num_qubits < 1 || num_qubits > kMaxQubits) {
        throw CapacityError(
            "qubit count " + std::to_string(num_qubits) + " outside [1, " + std::to_string(kMaxQubits) + "]");
    }
    amplitudes_.assign(std::size_t{1} << num_qubits, Complex(0, 0));
}

StateVector StateVector::ground(std::size_t num_qubits) {
    StateVector s(num_qubits);
    s.amplitudes_[0] = 1;
    return s;
}

StateVector StateVector::from_amplitudes(std::vector<Complex> amplitudes) {
    const std::size_t n = amplitudes.size();
    if (n < 2 || (n & (n - 1)) != 0) {
        throw std::invalid_argument("amplitude count must be a power of two >= 2");
    }
    std::size_t q = 0;
    while ((std::size_t{1} << q) < n) {
        q++;
    }
    StateVector s(q);
    s.amplitudes_ = std::move(amplitudes);
    if (s.norm() < 1e-15) {
        throw std::invalid_argument("zero-norm amplitude vector");
    }
    s.renormalize();
    return s;
}

StateVector StateVector::tensor(const StateVector &low, const StateVector &high) {
    StateVector s(low.num_qubits_ + high.num_qubits_);
    const std::size_t dl = low.dimension();
    for (std::size_t h = 0; h < high.dimension(); h++) {
        const Complex ah = high.amplitudes_[h];
        if (ah == Complex(0, 0)) {
            continue;
        }
        for (std::size_t l = 0; l < dl; l++) {
            s.amplitudes_[h * dl + l] = ah * low.amplitudes_[l];
        }
    }
    return s;
}

void StateVector::check_qubit(std::size_t qubit) const {
    if (qubit >= num_qubits_) {
        throw std::out_of_range(
            "qubit " + std::to_string(qubit) + " out of range for " + std::to_string(num_qubits_) + " qubits");
    }
}

void StateVector::apply(const Gate2x2 &gate, std::size_t qubit) {
    check_qubit(qubit);
    const std::size_t mask = std::size_t{1} << qubit;
    const std::size_t n = amplitudes_.size();
    const Complex g00 = gate.m[0], g01 = gate.m[1], g10 = gate.m[2], g11 = gate.m[3];
    for (std::size_t base = 0; base < n; base += 2 * mask) {
        for (std::size_t i = base; i < base + mask; i++) {
            const Complex a0 = amplitudes_[i];
            const Complex a1 = amplitudes_[i | mask];
            amplitudes_[i] = g00 * a0 + g01 * a1;
            amplitudes_[i | mask] = g10 * a0 + g11 * a1;
        }
    }
}

void StateVector::apply_controlled(const Gate2x2 &gate, std::size_t control, std::size_t target) {
    check_qubit(control);
    check_qubit(target);
    if (control == target) {
        throw std::invalid_argument("control and target must differ");
    }
    const std::size_t cm = std::size_t{1} << control;
    const std::size_t tm = std::size_t{1} << target;
    const Complex g00 = gate.m[0], g01 = gate.m[1], g10 = gate.m[2], g11 = gate.m[3];
    const std::size_t n = amplitudes_.size();
    for (std::size_t i = 0; i < n; i++) {
        if ((i & cm) && !(i & tm)) {
            const Complex a0 = amplitudes_[i];
            const Complex a1 = amplitudes_[i | tm];
            amplitudes_[i] = g00 * a0 + g01 * a1;
            amplitudes_[i | tm] = g10 * a0 + g11 * a1;
        }
    }
}

void StateVector::apply_string(std::span<const QubitOp> ops) {
    for (const auto &op : ops) {
        apply(op.gate, op.qubit);
    }
}

double StateVector::probability_one(std::size_t qubit) const {
    check_qubit(qubit);
    const std::size_t mask = std::size_t{1} << qubit;
    double p = 0;
    for (std::size_t i = 0; i < amplitudes_.size(); i++) {
        if (i & mask) {
            p += std::norm(amplitudes_[i]);
        }
    }
    return std::clamp(p, 0.0, 1.0);
}

int StateVector::measure(std::size_t qubit, RngStream &rng) {
    const double p1 = probability_one(qubit);
    const double p0 = 1.0 - p1;
    int bit;
    if (p1 < kZeroProbability) {
        bit = 0;
    } else if (p0 < kZeroProbability) {
        bit = 1;
    } else {
        bit = rng.uniform() < p0 ? 0 : 1;
    }
    project(qubit, bit);
    return bit;
}

double StateVector::project(std::size_t qubit, int bit) {
    check_qubit(qubit);
    const std::size_t mask = std::size_t{1} << qubit;
    const std::size_t keep = bit ? mask : 0;
    double p = 0;
    for (std::size_t i = 0; i < amplitudes_.size(); i++) {
        if ((i & mask) == keep) {
            p += std::norm(amplitudes_[i]);
        } else {
            amplitudes_[i] = 0;
        }
    }
    if (p < 1e-15) {
        throw std::logic_error("projection onto a zero-probability measurement branch");
    }
    const double inv = 1.0 / std::sqrt(p);
    for (auto &a : amplitudes_) {
        a *= inv;
    }
    return p;
}

Complex StateVector::expectation(std::span<const QubitOp> ops) const {
    StateVector tmp = *this;
    tmp.apply_string(ops);
    return inner(tmp);
}

double StateVector::project_onto(std::span<const QubitOp> ops, int sign) {
    StateVector flipped = *this;
    flipped.apply_string(ops);
    const double s = sign >= 0 ? 1.0 : -1.0;
    for (std::size_t i = 0; i < amplitudes_.size(); i++) {
        amplitudes_[i] = 0.5 * (amplitudes_[i] + s * flipped.amplitudes_[i]);
    }
    const double p = norm() * norm();
    if (p < 1e-15) {
        throw std::logic_error("projection onto an empty eigenspace");
    }
    renormalize();
    return p;
}

Complex StateVector::inner(const StateVector &other) const {
    if (other.num_qubits_ != num_qubits_) {
        throw std::invalid_argument("dimension mismatch in inner product");
    }
    Complex acc = 0;
    for (std::size_t i = 0; i < amplitudes_.size(); i++) {
        acc += std::conj(amplitudes_[i]) * other.amplitudes_[i];
    }
    return acc;
}

Complex StateVector::inner_embedded(const StateVector &other) const {
    if (other.num_qubits_ < num_qubits_) {
        throw std::invalid_argument("embedded inner product needs a register at least as wide");
    }
    Complex acc = 0;
    for (std::size_t i = 0; i < amplitudes_.size(); i++) {
        acc += std::conj(amplitudes_[i]) * other.amplitudes_[i];
    }
    return acc;
}

double StateVector::norm() const {
    double acc = 0;
    for (const auto &a : amplitudes_) {
        acc += std::norm(a);
    }
    return std::sqrt(acc);
}

void StateVector::renormalize() {
    const double inv = 1.0 / norm();
    for (auto &a : amplitudes_) {
        a *= inv;
    }
}

void StateVector::write_text(std::ostream &out) const {
    char buf[96];
    for (std::size_t i = 0; i < amplitudes_.size(); i++) {
        std::snprintf(buf, sizeof(buf), "%zu %.17g %.17g\n", i, amplitudes_[i].real(), amplitudes_[i].imag());
        out << buf;
    }
}

double fidelity(const StateVector &a, const StateVector &b) {
    return std::clamp(std::norm(a.inner(b)), 0.0, 1.0);
}

double fidelity(std::array<Complex, 2> a, std::array<Complex, 2> b) {
    const double na = std::norm(a[0]) + std::norm(a[1]);
    const double nb = std::norm(b[0]) + std::norm(b[1]);
    if (na == 0 || nb == 0) {
        return 0;
    }
    const Complex ov = std::conj(a[0]) * b[0] + std::conj(a[1]) * b[1];
    return std::clamp(std::norm(ov) / (na * nb), 0.0, 1.0);
}

}  // namespace nps
