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

#include "nps/nonpauli_algebra.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nps {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

double wrap_2pi(double x) {
    double r = std::fmod(x, kTwoPi);
    if (r < 0) {
        r += kTwoPi;
    }
    if (r >= kTwoPi) {
        r = 0;
    }
    return r;
}

double wrap_pm_pi(double x) {
    double r = wrap_2pi(x);
    if (r > std::numbers::pi) {
        r -= kTwoPi;
    }
    return r;
}

std::array<Complex, 2> column(const Gate2x2 &g, std::size_t c) {
    return {g(0, c), g(1, c)};
}

std::array<Complex, 2> mul(const Gate2x2 &g, std::array<Complex, 2> v) {
    return {g(0, 0) * v[0] + g(0, 1) * v[1], g(1, 0) * v[0] + g(1, 1) * v[1]};
}

double vec_diff(std::array<Complex, 2> a, std::array<Complex, 2> b) {
    return std::max(std::abs(a[0] - b[0]), std::abs(a[1] - b[1]));
}

// Dense matrix over 2^n basis states, row-major.
struct Dense {
    std::size_t dim;
    std::vector<Complex> m;
};

Dense dense_of(const OperatorString &ops, std::size_t n) {
    if (n > 10) {
        throw std::invalid_argument("dense operator limited to 10 qubits");
    }
    const std::size_t dim = std::size_t{1} << n;
    std::vector<Gate2x2> per_qubit(n, Gate2x2::identity());
    for (const auto &op : ops) {
        if (op.qubit >= n) {
            throw std::out_of_range("operator qubit out of range");
        }
        per_qubit[op.qubit] = op.gate * per_qubit[op.qubit];
    }
    Dense d{dim, std::vector<Complex>(dim * dim)};
    for (std::size_t r = 0; r < dim; r++) {
        for (std::size_t c = 0; c < dim; c++) {
            Complex v = 1;
            for (std::size_t q = 0; q < n && v != Complex(0, 0); q++) {
                v *= per_qubit[q]((r >> q) & 1, (c >> q) & 1);
            }
            d.m[r * dim + c] = v;
        }
    }
    return d;
}

Dense matmul(const Dense &a, const Dense &b) {
    Dense out{a.dim, std::vector<Complex>(a.dim * a.dim)};
    for (std::size_t i = 0; i < a.dim; i++) {
        for (std::size_t k = 0; k < a.dim; k++) {
            const Complex x = a.m[i * a.dim + k];
            if (x == Complex(0, 0)) {
                continue;
            }
            for (std::size_t j = 0; j < a.dim; j++) {
                out.m[i * a.dim + j] += x * b.m[k * a.dim + j];
            }
        }
    }
    return out;
}

}  // namespace

Su2Params Su2Params::canonical() const {
    if (!std::isfinite(gamma) || !std::isfinite(theta) || !std::isfinite(phi)) {
        throw std::invalid_argument("SU(2) parameters must be finite");
    }
    Su2Params p{wrap_2pi(gamma), wrap_2pi(theta), phi};
    if (p.theta > std::numbers::pi) {
        // n(theta, phi) == n(2pi - theta, phi + pi)
        p.theta = kTwoPi - p.theta;
        p.phi += std::numbers::pi;
    }
    p.phi = wrap_2pi(p.phi);
    return p;
}

bool OperatorBasis::is_pauli() const {
    return max_abs_diff(s_a, gates::X()) < 1e-15 && max_abs_diff(s_b, gates::Z()) < 1e-15;
}

OperatorBasis build_basis(const Su2Params &raw) {
    const Su2Params p = raw.canonical();
    const Complex i(0, 1);
    const double ct = std::cos(p.theta);
    const double st = std::sin(p.theta);
    const Gate2x2 axis{ct, st * std::exp(-i * p.phi), st * std::exp(i * p.phi), -ct};
    const double cg = std::cos(p.gamma / 2);
    const double sg = std::sin(p.gamma / 2);

    OperatorBasis b;
    b.params = p;
    b.u = Complex(cg) * Gate2x2::identity() + (i * sg) * axis;
    const Gate2x2 ud = b.u.adjoint();
    b.s_a = b.u * gates::X() * ud;
    b.s_b = b.u * gates::Z() * ud;
    b.s_c = i * (b.s_a * b.s_b);
    b.eig_b_plus = column(b.u, 0);
    b.eig_b_minus = column(b.u, 1);
    const double r = 1.0 / std::sqrt(2.0);
    b.eig_a_plus = {r * (b.u(0, 0) + b.u(0, 1)), r * (b.u(1, 0) + b.u(1, 1))};
    b.eig_a_minus = {r * (b.u(0, 0) - b.u(0, 1)), r * (b.u(1, 0) - b.u(1, 1))};
    b.ground_coeff_plus = std::conj(b.u(0, 0));
    b.ground_coeff_minus = std::conj(b.u(0, 1));
    return b;
}

OperatorBasis pauli_basis() {
    return build_basis({0, 0, 0});
}

double AlgebraReport::worst() const {
    return std::max({unitarity, involution_a, involution_b, involution_c, anticommutation, s_c_definition,
                     conjugation, eigenvectors, cross_qubit_commutation, steane_substitution});
}

double commutator_residual(const OperatorString &a, const OperatorString &b, std::size_t num_qubits) {
    const Dense da = dense_of(a, num_qubits);
    const Dense db = dense_of(b, num_qubits);
    const Dense ab = matmul(da, db);
    const Dense ba = matmul(db, da);
    double r = 0;
    for (std::size_t k = 0; k < ab.m.size(); k++) {
        r = std::max(r, std::abs(ab.m[k] - ba.m[k]));
    }
    return r;
}

std::vector<OperatorString> substituted_steane_generators(const OperatorBasis &basis) {
    // Rows of the [7,4] Hamming parity-check matrix; each contains qubit 0.
    static constexpr std::array<std::array<int, 7>, 3> kRows{{
        {1, 1, 1, 1, 0, 0, 0},
        {1, 1, 0, 0, 1, 1, 0},
        {1, 0, 1, 0, 1, 0, 1},
    }};
    std::vector<OperatorString> out;
    for (int kind = 0; kind < 2; kind++) {
        for (const auto &row : kRows) {
            OperatorString ops;
            for (std::size_t q = 0; q < 7; q++) {
                if (!row[q]) {
                    continue;
                }
                if (q == 0) {
                    ops.push_back({q, kind == 0 ? basis.s_a : basis.s_b});
                } else {
                    ops.push_back({q, kind == 0 ? gates::X() : gates::Z()});
                }
            }
            out.push_back(std::move(ops));
        }
    }
    return out;
}

AlgebraReport check_cross_qubit_commutation(const OperatorBasis &b) {
    const Gate2x2 id = Gate2x2::identity();
    const Complex i(0, 1);
    AlgebraReport r;
    r.unitarity = std::max({b.u.unitarity_residual(), b.s_a.unitarity_residual(), b.s_b.unitarity_residual(),
                            b.s_c.unitarity_residual()});
    r.involution_a = max_abs_diff(b.s_a * b.s_a, id);
    r.involution_b = max_abs_diff(b.s_b * b.s_b, id);
    r.involution_c = max_abs_diff(b.s_c * b.s_c, id);
    r.anticommutation = max_abs_diff(b.s_a * b.s_b + b.s_b * b.s_a, Gate2x2{0, 0, 0, 0});
    r.s_c_definition = max_abs_diff(b.s_c, i * (b.s_a * b.s_b));
    r.conjugation = std::max(max_abs_diff(b.s_a, b.u * gates::X() * b.u.adjoint()),
                             max_abs_diff(b.s_b, b.u * gates::Z() * b.u.adjoint()));

    const auto neg = [](std::array<Complex, 2> v) { return std::array<Complex, 2>{-v[0], -v[1]}; };
    r.eigenvectors = std::max({vec_diff(mul(b.s_b, b.eig_b_plus), b.eig_b_plus),
                               vec_diff(mul(b.s_b, b.eig_b_minus), neg(b.eig_b_minus)),
                               vec_diff(mul(b.s_a, b.eig_a_plus), b.eig_a_plus),
                               vec_diff(mul(b.s_a, b.eig_a_minus), neg(b.eig_a_minus))});
    const std::array<Complex, 2> rebuilt{
        b.ground_coeff_plus * b.eig_b_plus[0] + b.ground_coeff_minus * b.eig_b_minus[0],
        b.ground_coeff_plus * b.eig_b_plus[1] + b.ground_coeff_minus * b.eig_b_minus[1]};
    r.eigenvectors = std::max(r.eigenvectors, vec_diff(rebuilt, {1, 0}));

    r.cross_qubit_commutation = commutator_residual({{0, b.s_a}, {1, b.s_a}}, {{0, b.s_b}, {1, b.s_b}}, 2);

    const auto steane = substituted_steane_generators(b);
    double worst = 0;
    for (std::size_t x = 0; x < steane.size(); x++) {
        for (std::size_t y = x + 1; y < steane.size(); y++) {
            worst = std::max(worst, commutator_residual(steane[x], steane[y], 7));
        }
    }
    r.steane_substitution = worst;
    return r;
}

TargetSolution solve_params_for_target(Complex alpha, Complex beta, std::size_t chain_len) {
    if (chain_len < 1) {
        throw std::invalid_argument("chain length must be >= 1");
    }
    const double a = std::abs(alpha);
    const double b = std::abs(beta);
    if (std::abs(a * a + b * b - 1) > 1e-9) {
        throw std::invalid_argument("target amplitudes must be normalized");
    }
    TargetSolution out;
    out.ill_conditioned = (a > 0 && a < 1e-6) || (b > 0 && b < 1e-6);

    const double inv_d = 1.0 / static_cast<double>(chain_len);
    double c = std::pow(a, inv_d);
    double s = std::pow(b, inv_d);
    const double n = std::hypot(c, s);
    c /= n;
    s /= n;
    double rel_phase = 0;
    if (a > 0 && b > 0) {
        rel_phase = wrap_pm_pi(std::arg(beta) - std::arg(alpha)) * inv_d;
    }
    out.chain_coeffs = {c, s * std::exp(Complex(0, rel_phase))};

    // U^dagger|0> = (cos(gamma/2), -i sin(gamma/2) e^{i phi}) for theta = pi/2, which is the
    // rotation of minimal angle taking the north pole to (c, s e^{i rel_phase}).
    const double gamma = 2 * std::atan2(s, c);
    if (gamma < 1e-15) {
        out.params = Su2Params{0, 0, 0};
    } else {
        out.params = Su2Params{gamma, std::numbers::pi / 2, rel_phase + std::numbers::pi / 2}.canonical();
    }
    return out;
}

}  // namespace nps
