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

#include "dense.h"
#include "nps/code_lattice.h"
#include "nps/measurement_circuits.h"

using namespace nps;
using namespace nps::test;

namespace {

StateVector with_ancilla(const Vec &v) {
    std::vector<Complex> amps(v.data(), v.data() + v.size());
    return StateVector::tensor(StateVector::from_amplitudes(amps), StateVector::ground(1));
}

}  // namespace

TEST_CASE("Hadamard test projects like the dense eigenprojector") {
    const OperatorBasis b = build_basis({2.2, 0.9, 4.1});
    const std::size_t n = 4;
    const OperatorString op{{0, b.s_a}, {2, b.s_a}, {3, b.s_a}};
    const Mat dense = dense_op(op, n);
    const Vec v = random_state(n, 17);
    for (int bit : {0, 1}) {
        StateVector s = with_ancilla(v);
        TrialContext ctx(1, 0, NoiseChannel::noiseless(), b);
        ctx.set_script({bit});
        const int out = measure_operator(s, op, n, ctx);
        CHECK(out == (bit ? -1 : +1));
        const Mat proj = 0.5 * (Mat::Identity(16, 16) + static_cast<double>(out) * dense);
        const Vec expect = proj * v;
        CHECK(ctx.decisions().at(0).probability == doctest::Approx(expect.squaredNorm()).epsilon(1e-12));
        const Vec got = to_vec(s).head(16);
        CHECK(max_abs(got - expect / expect.norm()) < 1e-12);
        CHECK(s.probability_one(n) < 1e-15);
    }
}

TEST_CASE("Born-rule outcome rate of a temporary pair") {
    const OperatorBasis b = build_basis({1.4, 1.0, 0.3});
    const double c2 = std::norm(b.ground_coeff_plus), s2 = std::norm(b.ground_coeff_minus);
    int plus = 0;
    const int trials = 20000;
    for (int k = 0; k < trials; k++) {
        StateVector s = StateVector::ground(3);
        TrialContext ctx(8, static_cast<std::uint64_t>(k), NoiseChannel::noiseless(), b);
        plus += measure_temporary_pair(s, 0, 1, b, 2, ctx) > 0;
    }
    const double p = c2 * c2 + s2 * s2;
    const double sigma = std::sqrt(p * (1 - p) / trials);
    CHECK(std::abs(plus / static_cast<double>(trials) - p) < 5 * sigma);
}

TEST_CASE("circuit preconditions") {
    const OperatorBasis b = pauli_basis();
    TrialContext ctx(1, 0, NoiseChannel::noiseless(NoiseMode::Pauli), b);
    StateVector s = StateVector::ground(3);
    CHECK_THROWS_AS(measure_temporary_pair(s, 1, 1, b, 2, ctx), std::invalid_argument);
    s.apply(gates::X(), 2);
    CHECK_THROWS_AS(measure_operator(s, {{0, gates::Z()}}, 2, ctx), std::logic_error);
}

TEST_CASE("circuit noise sites per measurement") {
    const OperatorBasis b = pauli_basis();
    TrialContext ctx(1, 0, NoiseChannel::noiseless(NoiseMode::Pauli), b);
    StateVector s = StateVector::ground(5);
    const StabilizerTile tile{0, TileKind::B, {0, 1, 2, 3}};
    measure_stabilizer(s, tile, b, 4, ctx);
    CHECK(ctx.sites(SiteKind::Reset) == 1);
    CHECK(ctx.sites(SiteKind::AncillaGate) == 2);
    CHECK(ctx.sites(SiteKind::ControlledGate) == 4);
}

TEST_CASE("double measurement discards on disagreement") {
    const OperatorBasis b = pauli_basis();
    const StabilizerTile tile{0, TileKind::B, {0, 1}};
    TrialContext ctx(1, 0, NoiseChannel::noiseless(NoiseMode::Pauli), b);
    StateVector s = StateVector::ground(3);
    const DoubleMeasurement same = double_measure_with_discard(s, tile, b, 2, ctx);
    CHECK(same.first == 1);
    CHECK(same.second == 1);
    CHECK_FALSE(same.discarded);
    const DoubleMeasurement flipped =
        double_measure_with_discard(s, tile, b, 2, ctx, [](StateVector &st) { st.apply(gates::X(), 0); });
    CHECK(flipped.first == 1);
    CHECK(flipped.second == -1);
    CHECK(flipped.discarded);
}
