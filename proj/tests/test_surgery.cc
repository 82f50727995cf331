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

#include "dense.h"
#include "nps/lattice_surgery.h"

using namespace nps;
using namespace nps::test;

namespace {

const OperatorBasis &np_basis() {
    static const OperatorBasis b = build_basis({0.9, 1.2, 0.5});
    return b;
}

OperatorString product_of(const MergedLayout &m, const std::vector<StabilizerTile> &tiles) {
    OperatorString out;
    for (const auto &t : tiles) {
        const OperatorString op = m.op(t);
        out.insert(out.end(), op.begin(), op.end());
    }
    return out;
}

}  // namespace

TEST_CASE("merged layouts validate at d = 2 and d = 3") {
    for (std::size_t d : {2u, 3u}) {
        for (BoundaryKind kind : {BoundaryKind::Rough, BoundaryKind::Smooth}) {
            const MergedLayout m = build_merged_layout(d, kind, pauli_basis(), np_basis());
            const MergedLayoutReport rep = validate_merged_layout(m);
            CHECK_MESSAGE(rep.ok(), m.describe());
            CHECK(rep.generator_count == 2 * d * d - 1);
            CHECK(m.num_qubits() == 2 * d * d + 1);
            std::size_t seam_weight = 0;
            for (const auto &t : m.seam_tiles) {
                CHECK((t.kind == TileKind::A) == (kind == BoundaryKind::Rough));
                seam_weight += t.qubits.size();
            }
            CHECK(seam_weight == 2 * d);
        }
    }
}

TEST_CASE("seam product equals the joint logical densely at d = 2") {
    for (BoundaryKind kind : {BoundaryKind::Rough, BoundaryKind::Smooth}) {
        const MergedLayout m = build_merged_layout(2, kind, pauli_basis(), np_basis());
        const std::size_t n = 8;
        const Mat seam = dense_op(product_of(m, m.seam_tiles), n);
        const Mat joint = dense_op(m.joint_logical(), n);
        CHECK(max_abs(seam - joint) < 1e-12);

        // Every merged-code generator commutes with every other.
        const auto gens = m.merged_code_tiles();
        std::vector<Mat> ops;
        for (const auto &t : gens) {
            ops.push_back(dense_op(m.op(t), n));
        }
        for (std::size_t x = 0; x < ops.size(); x++) {
            for (std::size_t y = x + 1; y < ops.size(); y++) {
                CHECK(max_abs(ops[x] * ops[y] - ops[y] * ops[x]) < 1e-12);
            }
        }
    }
}

TEST_CASE("exhaustive noiseless merge and split at d = 2") {
    for (BoundaryKind kind : {BoundaryKind::Rough, BoundaryKind::Smooth}) {
        const MergedLayout m = build_merged_layout(2, kind, pauli_basis(), np_basis());
        const std::array<Complex, 2> psi_p{0.6, Complex(0, 0.8)};
        const std::array<Complex, 2> psi_q{std::polar(0.28, 0.4), std::polar(0.96, -1.1)};
        const MergeVerification v = verify_merge(m, psi_p, psi_q, true);
        CHECK(v.saw_m(0));
        CHECK(v.saw_m(1));
        CHECK(v.worst_fidelity() >= 1 - 1e-9);
        CHECK(v.worst_route_gap() < 1e-9);
    }
}

TEST_CASE("split reference is the joint-logical projection") {
    const MergedLayout m = build_merged_layout(2, BoundaryKind::Rough, pauli_basis(), np_basis());
    const std::array<Complex, 2> psi_p{0.8, 0.6};
    const std::array<Complex, 2> psi_q{Complex(0, 1) / std::sqrt(2.0), 1 / std::sqrt(2.0)};
    const StateVector base = two_patch_state(m, psi_p, psi_q);
    for (int mm : {0, 1}) {
        StateVector proj = base;
        proj.project_onto(m.joint_logical(), mm ? -1 : +1);
        CHECK(fidelity(proj, split_state_reference(m, psi_p, psi_q, mm)) >= 1 - 1e-12);
    }
}

TEST_CASE("logical CNOT on basis inputs") {
    const CnotSetup setup = build_cnot_setup(np_basis());
    for (int p : {0, 1}) {
        for (int q : {0, 1}) {
            const std::array<Complex, 2> psi_p{p == 0 ? 1.0 : 0.0, p == 1 ? 1.0 : 0.0};
            const std::array<Complex, 2> psi_q{q == 0 ? 1.0 : 0.0, q == 1 ? 1.0 : 0.0};
            const auto branches = verify_cnot(setup, psi_p, psi_q);
            REQUIRE_FALSE(branches.empty());
            for (const auto &b : branches) {
                CHECK(b.fidelity >= 1 - 1e-9);
            }
        }
    }
}

TEST_CASE("merge layout errors") {
    CHECK_THROWS(build_merged_layout(1, BoundaryKind::Rough, pauli_basis(), pauli_basis()));
    CHECK(std::string(boundary_kind_name(BoundaryKind::Smooth)) == "smooth");
}
