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

#ifndef NPS_LATTICE_SURGERY_H
#define NPS_LATTICE_SURGERY_H

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "nps/code_lattice.h"
#include "nps/noise_model.h"
#include "nps/nonpauli_algebra.h"
#include "nps/statevector.h"

namespace nps {

/// Rough merges measure X_L (x) X_L across a vertical seam (Q to the right of P);
/// smooth merges measure Z_L (x) Z_L across a horizontal seam (Q below P).
enum class BoundaryKind { Rough, Smooth };

const char *boundary_kind_name(BoundaryKind kind);

struct SurgeryPatch {
    RotatedSurfaceLayout layout;
    OperatorBasis basis;
    std::size_t offset = 0;

    /// Tile with qubits shifted to global indices.
    StabilizerTile global_tile(const StabilizerTile &tile) const;
    OperatorString logical_x() const;
    OperatorString logical_z() const;
};

/// Two patches plus the seam that joins them. All qubit indices in tiles here are global.
struct MergedLayout {
    std::size_t distance = 0;
    BoundaryKind boundary = BoundaryKind::Rough;
    SurgeryPatch patch_p;
    SurgeryPatch patch_q;
    /// Seam tiles, all of the seam kind (A for rough, B for smooth), spanning both patches.
    std::vector<StabilizerTile> seam_tiles;
    /// Products of removed boundary tiles that commute with every seam tile.
    std::vector<StabilizerTile> merged_tiles;
    /// Patch tile indices (into layout.tiles) that anticommute with a seam tile.
    std::vector<std::size_t> removed_p;
    std::vector<std::size_t> removed_q;
    /// Seam block sizes along the boundary, e.g. {2, 1}.
    std::vector<std::size_t> blocks;
    /// Boundary qubits of P and Q, paired position by position.
    std::vector<std::size_t> boundary_p;
    std::vector<std::size_t> boundary_q;
    std::size_t ancilla = 0;

    std::size_t num_qubits() const {
        return ancilla + 1;
    }
    const OperatorBasis &basis_of(std::size_t qubit) const;
    /// Operator of a global tile; each factor uses the basis of the patch owning its qubit.
    OperatorString op(const StabilizerTile &tile) const;
    /// Joint logical operator measured by the merge: X_L^P X_L^Q or Z_L^P Z_L^Q.
    OperatorString joint_logical() const;
    /// All stabilizers of the merged code: retained patch tiles, merged tiles, seam tiles.
    std::vector<StabilizerTile> merged_code_tiles() const;
    /// Original tiles of both patches, global indices.
    std::vector<StabilizerTile> patch_tiles() const;
    std::string describe() const;
};

/// Searches seam tilings (Q parity, then block composition) and validates the result.
/// Throws std::logic_error when no valid tiling exists.
MergedLayout build_merged_layout(std::size_t distance, BoundaryKind kind, const OperatorBasis &basis_p,
                                 const OperatorBasis &basis_q, std::size_t offset_p = 0,
                                 std::size_t offset_q = static_cast<std::size_t>(-1), bool p_flipped = false,
                                 std::size_t ancilla = static_cast<std::size_t>(-1));

struct MergedLayoutReport {
    double max_commutator = 0;
    double product_residual = 0;
    std::size_t generator_count = 0;
    bool ok(double tol = 1e-10) const {
        return max_commutator < tol && product_residual < tol;
    }
};

/// Numerical check: every merged-code tile commutes with every other and with every retained patch
/// tile, and the seam product equals the joint logical. Dense for up to 8 data qubits, sampled
/// statevector otherwise.
MergedLayoutReport validate_merged_layout(const MergedLayout &merged);

struct MergeOutcome {
    int m = 0;
    std::vector<int> seam_outcomes;
    std::size_t rounds = 0;
};

/// Repeats seam measurements `rounds` times (default d) with per-tile majority vote.
MergeOutcome merge_measure(StateVector &state, const MergedLayout &merged, TrialContext &ctx,
                           std::size_t rounds = 0);

struct SplitRecord {
    std::vector<int> patch_outcomes;
    /// Seam tile indices applied as correction.
    std::vector<std::size_t> corrections;
};

/// Measures every original tile of both patches once, then applies seam-tile operators so every
/// patch tile reads +1.
SplitRecord split(StateVector &state, const MergedLayout &merged, TrialContext &ctx);

enum class ReferenceRoute { ViaQ, ViaP };

/// Noiseless merged state for logical inputs (a_P, b_P), (a_Q, b_Q) and the given seam outcomes,
/// over the full register (ancilla in |0>). ViaQ spans {Pi|0_P 0_Q>, Pi|0_P 1_Q>}, ViaP spans
/// {Pi|0_P 0_Q>, Pi|1_P 0_Q>}; the two agree.
StateVector merged_state_reference(const MergedLayout &merged, std::array<Complex, 2> psi_p,
                                   std::array<Complex, 2> psi_q, const std::vector<int> &seam_outcomes,
                                   ReferenceRoute route = ReferenceRoute::ViaQ);

/// Logical state after merge-and-split for outcome m, (1 + (-1)^m J)|psi_P psi_Q> normalized.
StateVector split_state_reference(const MergedLayout &merged, std::array<Complex, 2> psi_p,
                                  std::array<Complex, 2> psi_q, int m);

/// Product of two patch code states on the full register.
StateVector two_patch_state(const MergedLayout &merged, std::array<Complex, 2> psi_p, std::array<Complex, 2> psi_q);

struct CnotCorrection {
    int m1 = 0;  // Z_P Z_R
    int m2 = 0;  // X_R X_Q
    int m3 = 0;  // Z_R
    bool x_on_q = false;
    bool z_on_p = false;
};

/// Three d = 2 patches: control P and ancilla R in the Pauli basis, target Q in `basis_q`.
struct CnotSetup {
    MergedLayout smooth;  // P with R
    MergedLayout rough;   // R with Q
    std::size_t num_qubits = 0;
    std::size_t ancilla = 0;
};

CnotSetup build_cnot_setup(const OperatorBasis &basis_q);

/// Runs CNOT(P -> Q) through R prepared in |+_L>. Returns the correction record; `state` holds
/// P, R, Q and the ancilla.
CnotCorrection logical_cnot(StateVector &state, const CnotSetup &setup, TrialContext &ctx);

/// Encodes logical amplitudes of P and Q (R in |+_L>) into the three-patch register.
StateVector cnot_input_state(const CnotSetup &setup, std::array<Complex, 2> psi_p, std::array<Complex, 2> psi_q);

/// Expected output: sum_ij c_ij |i>_P |m3>_R |j>_Q with c = CNOT applied to the two-qubit input.
StateVector cnot_expected_state(const CnotSetup &setup, const std::array<Complex, 4> &two_qubit, int m3);

struct MergeBranch {
    int m = 0;
    std::vector<int> seam_outcomes;
    /// Fidelity of the merged state to merged_state_reference.
    double merged_fidelity = 0;
    /// 1 - |<ViaQ|ViaP>|^2 of the two reference constructions.
    double route_gap = 0;
    /// Fidelity after split and correction to split_state_reference.
    double split_fidelity = 0;
};

struct MergeVerification {
    std::vector<MergeBranch> branches;
    double worst_fidelity() const;
    double worst_route_gap() const;
    bool saw_m(int m) const;
};

/// Noiseless merge and split of the given logical inputs. With `exhaustive`, every readout branch is
/// enumerated; otherwise `samples` Born-rule runs are drawn from `seed`.
MergeVerification verify_merge(const MergedLayout &merged, std::array<Complex, 2> psi_p,
                               std::array<Complex, 2> psi_q, bool exhaustive, std::size_t samples = 0,
                               std::uint64_t seed = 1);

struct CnotBranch {
    CnotCorrection correction;
    double fidelity = 0;
};

/// Every readout branch of logical_cnot on |psi_P>|psi_Q>, compared to the expected output.
std::vector<CnotBranch> verify_cnot(const CnotSetup &setup, std::array<Complex, 2> psi_p,
                                    std::array<Complex, 2> psi_q);

}  // namespace nps

#endif
