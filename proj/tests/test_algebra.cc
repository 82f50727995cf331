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

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dense.h"
#include "nps/nonpauli_algebra.h"

using namespace nps;
using namespace nps::test;

namespace {

Mat oracle_u(const Su2Params &p) {
    const cd i(0, 1);
    const Mat axis = std::sin(p.theta) * std::cos(p.phi) * pauli('X') +
                     std::sin(p.theta) * std::sin(p.phi) * pauli('Y') + std::cos(p.theta) * pauli('Z');
    return std::cos(p.gamma / 2) * Mat::Identity(2, 2) + i * std::sin(p.gamma / 2) * axis;
}

Su2Params random_params(std::mt19937_64 &gen) {
    std::uniform_real_distribution<double> u(0, 1);
    return {2 * std::numbers::pi * u(gen), std::numbers::pi * u(gen), 2 * std::numbers::pi * u(gen)};
}

}  // namespace

TEST_CASE("basis operators match the rotated Pauli oracle") {
    std::mt19937_64 gen(2024);
    for (int k = 0; k < 200; k++) {
        const Su2Params p = random_params(gen);
        const OperatorBasis b = build_basis(p);
        const Mat u = oracle_u(p);
        CHECK(max_abs(to_dense(b.u) - u) < 1e-13);
        const Mat sa = u * pauli('X') * u.adjoint();
        const Mat sb = u * pauli('Z') * u.adjoint();
        CHECK(max_abs(to_dense(b.s_a) - sa) < 1e-13);
        CHECK(max_abs(to_dense(b.s_b) - sb) < 1e-13);
        CHECK(max_abs(to_dense(b.s_c) - cd(0, 1) * sa * sb) < 1e-13);

        Vec plus_b(2), minus_b(2);
        plus_b << b.eig_b_plus[0], b.eig_b_plus[1];
        minus_b << b.eig_b_minus[0], b.eig_b_minus[1];
        CHECK(max_abs(sb * plus_b - plus_b) < 1e-13);
        CHECK(max_abs(sb * minus_b + minus_b) < 1e-13);
        CHECK(max_abs(sa * plus_b - minus_b) < 1e-13);
        Vec ground(2);
        ground << 1, 0;
        CHECK(std::abs(plus_b.dot(ground) - b.ground_coeff_plus) < 1e-13);
        CHECK(std::abs(minus_b.dot(ground) - b.ground_coeff_minus) < 1e-13);
    }
}

TEST_CASE("algebraic conditions hold for random parameters") {
    std::mt19937_64 gen(99);
    for (int k = 0; k < 300; k++) {
        const AlgebraReport r = check_cross_qubit_commutation(build_basis(random_params(gen)));
        CHECK(r.worst() < 1e-12);
    }
}

TEST_CASE("two-qubit products commute while single factors anticommute") {
    const OperatorBasis b = build_basis({0.9, 1.3, 2.1});
    const Mat sa = to_dense(b.s_a), sb = to_dense(b.s_b);
    const Mat aa = kron(sa, sa), bb = kron(sb, sb);
    CHECK(max_abs(aa * bb - bb * aa) < 1e-13);
    CHECK(max_abs(sa * sb + sb * sa) < 1e-13);
    CHECK(commutator_residual({{0, b.s_a}}, {{0, b.s_b}}, 1) > 1);
}

TEST_CASE("substituted Steane generators commute pairwise") {
    const OperatorBasis b = build_basis({1.7, 0.4, 5.0});
    const auto gens = substituted_steane_generators(b);
    REQUIRE(gens.size() == 6);
    for (std::size_t x = 0; x < gens.size(); x++) {
        for (std::size_t y = 0; y < gens.size(); y++) {
            const Mat a = dense_op(gens[x], 7), c = dense_op(gens[y], 7);
            CHECK(max_abs(a * c - c * a) < 1e-12);
        }
    }
}

TEST_CASE("pauli basis reduces to X, Z, Y") {
    const OperatorBasis b = pauli_basis();
    CHECK(b.is_pauli());
    CHECK(max_abs(to_dense(b.s_c) - pauli('Y')) < 1e-15);
    CHECK(std::abs(b.ground_coeff_plus - cd(1)) < 1e-15);
    CHECK(std::abs(b.ground_coeff_minus) < 1e-15);
}

TEST_CASE("canonical parameters describe the same rotation") {
    const Su2Params raw{7.0, 4.0, -1.0};
    const Su2Params c = raw.canonical();
    CHECK(c.gamma >= 0);
    CHECK(c.gamma < 2 * std::numbers::pi);
    CHECK(c.theta >= 0);
    CHECK(c.theta <= std::numbers::pi);
    CHECK(c.phi >= 0);
    CHECK(c.phi < 2 * std::numbers::pi);
    // Wrapping gamma by 2pi flips the sign of U, which leaves every conjugated operator unchanged.
    const Mat ur = oracle_u(raw), uc = oracle_u(c);
    CHECK(std::min(max_abs(ur - uc), max_abs(ur + uc)) < 1e-12);
    const Mat x = pauli('X');
    CHECK(max_abs(ur * x * ur.adjoint() - uc * x * uc.adjoint()) < 1e-12);
    CHECK_THROWS_AS((Su2Params{NAN, 0, 0}.canonical()), std::invalid_argument);
}

TEST_CASE("target solving reproduces the logical amplitudes") {
    const cd alpha = 1 / std::sqrt(2.0);
    const cd beta = std::polar(1 / std::sqrt(2.0), std::numbers::pi / 4);
    for (std::size_t d : {1u, 2u, 3u, 4u}) {
        const TargetSolution sol = solve_params_for_target(alpha, beta, d);
        const OperatorBasis b = build_basis(sol.params);
        CHECK(std::abs(b.ground_coeff_plus - sol.chain_coeffs[0]) < 1e-12);
        CHECK(std::abs(b.ground_coeff_minus - sol.chain_coeffs[1]) < 1e-12);
        const cd c = std::pow(b.ground_coeff_plus, static_cast<double>(d));
        const cd s = std::pow(b.ground_coeff_minus, static_cast<double>(d));
        CHECK(fidelity(std::array<cd, 2>{c, s}, std::array<cd, 2>{alpha, beta}) > 1 - 1e-12);
        CHECK_FALSE(sol.ill_conditioned);
    }
    const TargetSolution zero = solve_params_for_target(1, 0, 3);
    CHECK(zero.params.gamma == 0);
    CHECK(solve_params_for_target(std::sqrt(1 - 1e-14), 1e-7, 3).ill_conditioned);
    CHECK_THROWS_AS(solve_params_for_target(1, 1, 3), std::invalid_argument);
    CHECK_THROWS_AS(solve_params_for_target(1, 0, 0), std::invalid_argument);
}
