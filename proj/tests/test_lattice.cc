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

#include <algorithm>
#include <cmath>
#include <set>

#include "dense.h"
#include "nps/code_lattice.h"
#include "pauli_reference.h"

using namespace nps;
using namespace nps::test;

namespace {

const OperatorBasis &generic_basis() {
    static const OperatorBasis b = build_basis({0.83, 1.21, 0.47});
    return b;
}

StateVector product_state(const std::vector<std::array<Complex, 2>> &single) {
    std::vector<Complex> amps(std::size_t{1} << single.size(), 0);
    for (std::size_t i = 0; i < amps.size(); i++) {
        Complex a = 1;
        for (std::size_t q = 0; q < single.size(); q++) {
            a *= single[q][(i >> q) & 1];
        }
        amps[i] = a;
    }
    return StateVector::from_amplitudes(amps);
}

}  // namespace

TEST_CASE("layout geometry matches an independent plaquette construction") {
    for (std::size_t d : {2u, 3u, 4u}) {
        const RotatedSurfaceLayout layout = build_layout(d);
        CHECK(layout.num_data() == d * d);
        CHECK(layout.tiles.size() == d * d - 1);
        CHECK(layout.ancilla_index == d * d);
        const auto ref_tiles = ref::rotated_tiles(d);
        const auto order = layout.canonical_order();
        REQUIRE(order.size() == ref_tiles.size());
        for (std::size_t k = 0; k < order.size(); k++) {
            const StabilizerTile &t = layout.tiles[order[k]];
            CHECK(t.qubits == ref_tiles[k].qubits);
            CHECK((t.kind == TileKind::A) == (ref_tiles[k].kind == 'X'));
        }
        std::size_t a_count = 0;
        for (const auto &t : layout.tiles) {
            a_count += t.kind == TileKind::A;
        }
        CHECK(a_count == (d * d - 1) / 2);
    }
    CHECK_THROWS_AS(build_layout(1), std::invalid_argument);
    CHECK_THROWS_AS(build_layout(5), std::invalid_argument);
}

TEST_CASE("layouts validate in both checkerboard parities") {
    for (std::size_t d : {2u, 3u, 4u}) {
        for (bool flipped : {false, true}) {
            const LayoutReport rep = validate_layout(build_layout(d, flipped));
            CHECK_MESSAGE(rep.ok(), "d=" << d << " flipped=" << flipped);
        }
    }
}

TEST_CASE("tiles and logical chains obey the stabilizer algebra densely") {
    for (std::size_t d : {2u, 3u}) {
        const RotatedSurfaceLayout layout = build_layout(d);
        const std::size_t n = d * d;
        const OperatorBasis &b = generic_basis();
        std::vector<Mat> ops;
        for (const auto &t : layout.tiles) {
            ops.push_back(dense_op(tile_operator(t, b), n));
        }
        for (std::size_t x = 0; x < ops.size(); x++) {
            for (std::size_t y = x + 1; y < ops.size(); y++) {
                CHECK(max_abs(ops[x] * ops[y] - ops[y] * ops[x]) < 1e-12);
            }
        }
        const auto chains = logical_chains(layout);
        const Mat xl = dense_op(logical_operator(chains.x_chain, b), n);
        const Mat zl = dense_op(logical_operator(chains.z_chain, b), n);
        for (const Mat &s : ops) {
            CHECK(max_abs(xl * s - s * xl) < 1e-12);
            CHECK(max_abs(zl * s - s * zl) < 1e-12);
        }
        CHECK(max_abs(xl * zl + zl * xl) < 1e-12);
    }
}

TEST_CASE("code-space logical basis") {
    for (std::size_t d : {2u, 3u}) {
        const RotatedSurfaceLayout layout = build_layout(d);
        const std::size_t n = d * d;
        const OperatorBasis &b = generic_basis();
        const SectorBasis sector = logical_basis(layout, b);
        const Vec zero = to_vec(sector.zero), one = to_vec(sector.one);
        CHECK(std::abs(zero.norm() - 1) < 1e-12);
        CHECK(std::abs(zero.dot(one)) < 1e-12);
        for (const auto &t : layout.tiles) {
            const Mat s = dense_op(tile_operator(t, b), n);
            CHECK(max_abs(s * zero - zero) < 1e-12);
            CHECK(max_abs(s * one - one) < 1e-12);
        }
        const auto chains = logical_chains(layout);
        const Mat xl = dense_op(logical_operator(chains.x_chain, b), n);
        const Mat zl = dense_op(logical_operator(chains.z_chain, b), n);
        CHECK(max_abs(xl * zero - one) < 1e-12);
        CHECK(max_abs(zl * zero - zero) < 1e-12);
        CHECK(max_abs(zl * one + one) < 1e-12);

        const Complex alpha(0.6, 0.1), beta(0.2, -0.7);
        const StateVector psi = code_state(layout, b, alpha, beta);
        const auto amps = logical_amplitudes(sector, psi);
        const double nrm = std::sqrt(std::norm(alpha) + std::norm(beta));
        CHECK(std::abs(amps[0] - alpha / nrm) < 1e-12);
        CHECK(std::abs(amps[1] - beta / nrm) < 1e-12);
    }
}

TEST_CASE("sector logical basis lives in the requested syndrome sector") {
    const RotatedSurfaceLayout layout = build_layout(3);
    const OperatorBasis &b = generic_basis();
    std::vector<int> outcomes(layout.tiles.size(), +1);
    for (std::size_t k = 0; k < outcomes.size(); k += 3) {
        outcomes[k] = -1;
    }
    const SectorBasis sector = logical_basis(layout, b, outcomes);
    for (std::size_t k = 0; k < layout.tiles.size(); k++) {
        const Complex e0 = sector.zero.expectation(tile_operator(layout.tiles[k], b));
        const Complex e1 = sector.one.expectation(tile_operator(layout.tiles[k], b));
        CHECK(std::abs(e0 - static_cast<double>(outcomes[k])) < 1e-10);
        CHECK(std::abs(e1 - static_cast<double>(outcomes[k])) < 1e-10);
    }
    CHECK(std::abs(sector.zero.inner(sector.one)) < 1e-10);
}

TEST_CASE("deterministic tile prediction agrees with numeric expectations") {
    const OperatorBasis &b = generic_basis();
    const double r = 1 / std::sqrt(2.0);
    for (std::size_t d : {2u, 3u}) {
        const RotatedSurfaceLayout layout = build_layout(d);
        const std::size_t n = d * d;
        for (int pattern = 0; pattern < 6; pattern++) {
            InitSpec spec;
            std::vector<std::array<Complex, 2>> frame(n);
            const bool with_chain = pattern >= 3;
            spec.chain_coeffs = {Complex(0.8, 0), std::polar(0.6, 0.3)};
            for (std::size_t q = 0; q < n; q++) {
                const bool on_chain = with_chain && q % d == 0;
                const int pick = static_cast<int>((q * 7 + static_cast<std::size_t>(pattern)) % 3);
                if (on_chain) {
                    spec.qubits.push_back(QubitInit::ChainMember);
                    frame[q] = spec.chain_coeffs;
                } else if (pattern % 3 == 0 || pick == 0) {
                    spec.qubits.push_back(QubitInit::PlusB);
                    frame[q] = {1, 0};
                } else if (pick == 1) {
                    spec.qubits.push_back(QubitInit::PlusA);
                    frame[q] = {r, r};
                } else {
                    spec.qubits.push_back(QubitInit::Ground);
                    frame[q] = {b.ground_coeff_plus, b.ground_coeff_minus};
                }
            }
            // Rotate frame coefficients into the computational basis: v = U * (a, b).
            std::vector<std::array<Complex, 2>> single(n);
            for (std::size_t q = 0; q < n; q++) {
                single[q] = {b.u(0, 0) * frame[q][0] + b.u(0, 1) * frame[q][1],
                             b.u(1, 0) * frame[q][0] + b.u(1, 1) * frame[q][1]};
            }
            StateVector psi = product_state(single);
            if (with_chain) {
                for (std::size_t row = 0; row + 1 < d; row++) {
                    psi.project_onto(OperatorString{{row * d, b.s_b}, {(row + 1) * d, b.s_b}}, +1);
                }
            }
            std::set<std::pair<int, int>> numeric;
            for (const auto &t : layout.tiles) {
                const double e = psi.expectation(tile_operator(t, b)).real();
                if (std::abs(e) >= 1 - 1e-9) {
                    numeric.insert({t.tile_id, e > 0 ? 1 : -1});
                }
            }
            std::set<std::pair<int, int>> symbolic;
            for (const auto &dt : deterministic_tiles(layout, spec, b)) {
                symbolic.insert({dt.tile_id, dt.expected});
            }
            CHECK_MESSAGE(symbolic == numeric, "d=" << d << " pattern=" << pattern);
        }
    }
}

TEST_CASE("GF(2) solver") {
    // x0 ^ x1 = 1, x1 ^ x2 = 0, x2 = 1
    const auto sol = solve_gf2({{0b011, 1}, {0b110, 0}, {0b100, 1}}, 3);
    REQUIRE(sol);
    CHECK(*sol == 0b110);
    CHECK_FALSE(solve_gf2({{0b01, 1}, {0b01, 0}}, 2));
    const auto free_var = solve_gf2({{0b011, 0}}, 2);
    REQUIRE(free_var);
    CHECK(*free_var == 0);
    CHECK(overlap(std::vector<std::size_t>{1, 2, 5}, std::vector<std::size_t>{2, 5, 7}) == 2);
}
