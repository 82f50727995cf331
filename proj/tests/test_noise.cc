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
#include <optional>
#include <set>

#include "dense.h"
#include "nps/code_lattice.h"
#include "nps/measurement_circuits.h"
#include "nps/noise_model.h"

using namespace nps;
using namespace nps::test;

TEST_CASE("channel construction and validation") {
    const NoiseChannel sym = NoiseChannel::symmetric(NoiseMode::NonPauli, 0.03);
    CHECK(sym.p_a == doctest::Approx(0.01));
    CHECK(sym.p_c == doctest::Approx(0.01));
    const NoiseChannel w = NoiseChannel::weighted(NoiseMode::Pauli, 0.04, 2, 1, 1);
    CHECK(w.p_a == doctest::Approx(0.02));
    CHECK(w.p_b == doctest::Approx(0.01));
    CHECK(NoiseChannel::noiseless().is_noiseless());
    NoiseChannel bad = sym;
    bad.p_a = 0.5;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    NoiseChannel neg = NoiseChannel::noiseless();
    neg.p_t = -0.1;
    CHECK_THROWS_AS(neg.validate(), std::invalid_argument);
}

TEST_CASE("error gates per mode") {
    const OperatorBasis b = build_basis({1.0, 0.5, 0.2});
    CHECK(max_abs_diff(error_gate(ErrorBranch::A, NoiseMode::Pauli, b), gates::X()) == 0);
    CHECK(max_abs_diff(error_gate(ErrorBranch::B, NoiseMode::Pauli, b), gates::Z()) == 0);
    CHECK(max_abs_diff(error_gate(ErrorBranch::C, NoiseMode::Pauli, b), gates::Y()) == 0);
    CHECK(max_abs_diff(error_gate(ErrorBranch::A, NoiseMode::NonPauli, b), b.s_a) == 0);
    CHECK(max_abs_diff(error_gate(ErrorBranch::B, NoiseMode::NonPauli, b), b.s_b) == 0);
    CHECK(max_abs_diff(error_gate(ErrorBranch::C, NoiseMode::NonPauli, b), b.s_c) == 0);
    CHECK(max_abs_diff(error_gate(ErrorBranch::None, NoiseMode::NonPauli, b), Gate2x2::identity()) == 0);
}

TEST_CASE("categorical sampling frequencies and draw accounting") {
    RngStream rng(3, 0);
    const int n = 200000;
    int counts[4] = {0, 0, 0, 0};
    for (int k = 0; k < n; k++) {
        counts[static_cast<int>(sample_error(0.3, 0.05, 0.1, rng))]++;
    }
    const double expect[4] = {0.7, 0.05, 0.1, 0.15};
    for (int k = 0; k < 4; k++) {
        const double sigma = std::sqrt(expect[k] * (1 - expect[k]) / n);
        CHECK(std::abs(counts[k] / static_cast<double>(n) - expect[k]) < 5 * sigma);
    }
    RngStream a(4, 4), b(4, 4);
    CHECK(sample_error(0, 0, 0, a) == ErrorBranch::None);
    CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("trial context counts sites and applies forced faults") {
    const OperatorBasis b = pauli_basis();
    TrialContext ctx(1, 0, NoiseChannel::noiseless(NoiseMode::Pauli), b);
    ctx.add_fault({SiteKind::PrepGate, 1, ErrorBranch::A});
    StateVector s = StateVector::ground(2);
    CHECK(ctx.after_gate(s, 0, SiteKind::PrepGate) == ErrorBranch::None);
    CHECK(ctx.after_gate(s, 1, SiteKind::PrepGate) == ErrorBranch::A);
    CHECK(ctx.after_gate(s, 0, SiteKind::ControlledGate) == ErrorBranch::None);
    CHECK(ctx.sites(SiteKind::PrepGate) == 2);
    CHECK(ctx.sites(SiteKind::ControlledGate) == 1);
    CHECK(ctx.error_firings() == 1);
    CHECK(s.probability_one(1) == doctest::Approx(1.0));
    CHECK(s.probability_one(0) == doctest::Approx(0.0));
}

TEST_CASE("scripted readouts enumerate every branch once") {
    const OperatorBasis b = pauli_basis();
    TrialContext ctx(1, 0, NoiseChannel::noiseless(NoiseMode::Pauli), b);
    std::optional<std::vector<int>> script = std::vector<int>{};
    std::set<std::vector<int>> seen;
    while (script) {
        ctx.set_script(*script);
        StateVector s = StateVector::ground(3);
        s.apply(gates::H(), 0);
        s.apply(gates::H(), 1);
        std::vector<int> bits;
        bits.push_back(ctx.readout(s, 0, ReadoutKind::Tile));
        bits.push_back(ctx.readout(s, 2, ReadoutKind::Tile));
        bits.push_back(ctx.readout(s, 1, ReadoutKind::Pair));
        CHECK(bits[1] == 0);
        CHECK(seen.insert(bits).second);
        script = next_branch_script(ctx.decisions(), [](ReadoutKind) { return true; });
    }
    CHECK(seen.size() == 4);

    // Pair readouts excluded from branching.
    script = std::vector<int>{};
    std::size_t runs = 0;
    while (script) {
        ctx.set_script(*script);
        StateVector s = StateVector::ground(2);
        s.apply(gates::H(), 0);
        s.apply(gates::H(), 1);
        ctx.readout(s, 0, ReadoutKind::Tile);
        ctx.readout(s, 1, ReadoutKind::Pair);
        runs++;
        script = next_branch_script(ctx.decisions(), [](ReadoutKind k) { return k != ReadoutKind::Pair; });
    }
    CHECK(runs == 2);

    ctx.set_script({1});
    StateVector g = StateVector::ground(1);
    CHECK_THROWS_AS(ctx.readout(g, 0, ReadoutKind::Tile), std::logic_error);
}

// Every single-qubit error on a d = 3 code state, in both bases, flips exactly the tiles of the
// opposite kind containing that qubit (both kinds for S^C).
TEST_CASE("single-error syndromes at d = 3") {
    const RotatedSurfaceLayout layout = build_layout(3);
    for (const OperatorBasis &b : {pauli_basis(), build_basis({1.1, 0.7, 2.3})}) {
        const NoiseMode mode = b.is_pauli() ? NoiseMode::Pauli : NoiseMode::NonPauli;
        const StateVector code = StateVector::tensor(code_state(layout, b, 0.6, Complex(0, 0.8)),
                                                     StateVector::ground(1));
        for (std::size_t q = 0; q < 9; q++) {
            for (ErrorBranch e : {ErrorBranch::A, ErrorBranch::B, ErrorBranch::C}) {
                StateVector s = code;
                s.apply(error_gate(e, mode, b), q);
                TrialContext ctx(1, 0, NoiseChannel::noiseless(mode), b);
                for (const auto &t : layout.tiles) {
                    const int out = measure_stabilizer(s, t, b, layout.ancilla_index, ctx);
                    const bool incident = std::count(t.qubits.begin(), t.qubits.end(), q) > 0;
                    const bool detects = (t.kind == TileKind::B && e != ErrorBranch::B) ||
                                         (t.kind == TileKind::A && e != ErrorBranch::A);
                    CHECK(out == (incident && detects ? -1 : +1));
                }
            }
        }
    }
}
