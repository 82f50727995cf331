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

#ifndef NPS_CODE_LATTICE_H
#define NPS_CODE_LATTICE_H

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nps/nonpauli_algebra.h"
#include "nps/statevector.h"

namespace nps {

enum class TileKind { A, B };

char tile_kind_char(TileKind kind);

struct StabilizerTile {
    int tile_id = 0;
    TileKind kind = TileKind::A;
    /// Ascending data-qubit indices.
    std::vector<std::size_t> qubits;
};

struct LogicalOperator {
    TileKind kind = TileKind::A;
    std::vector<std::size_t> qubits;
};

struct GridCoord {
    std::size_t row;
    std::size_t col;
};

/// Rotated surface code on a d x d grid of data qubits, numbered row-major (qubit = row*d + col).
///
/// A-type weight-2 tiles sit on the top and bottom edges, B-type weight-2 tiles on the left and
/// right edges. `flipped` swaps the checkerboard, which mirrors the patch for odd d; two patches
/// merged side by side need opposite checkerboards for the merged lattice to stay rotated.
struct RotatedSurfaceLayout {
    std::size_t distance = 0;
    bool flipped = false;
    std::vector<GridCoord> data_qubits;
    std::vector<StabilizerTile> tiles;
    std::size_t ancilla_index = 0;

    std::size_t num_data() const {
        return data_qubits.size();
    }
    std::size_t qubit_at(std::size_t row, std::size_t col) const {
        return row * distance + col;
    }
    const StabilizerTile &tile(int tile_id) const;
    /// Tile indices in measurement order: A tiles by id, then B tiles by id.
    std::vector<std::size_t> canonical_order() const;
};

RotatedSurfaceLayout build_layout(std::size_t distance, bool flipped = false);

struct LogicalChains {
    LogicalOperator x_chain;  // S^A string down column 0
    LogicalOperator z_chain;  // S^B string along row 0
};

LogicalChains logical_chains(const RotatedSurfaceLayout &layout);
LogicalOperator x_chain_on_column(const RotatedSurfaceLayout &layout, std::size_t col);
LogicalOperator z_chain_on_row(const RotatedSurfaceLayout &layout, std::size_t row);

OperatorString tile_operator(const StabilizerTile &tile, const OperatorBasis &basis, std::size_t offset = 0);
OperatorString logical_operator(const LogicalOperator &op, const OperatorBasis &basis, std::size_t offset = 0);

/// Per-qubit preparation used to predict first-round stabilizer outcomes.
enum class QubitInit { Ground, PlusA, PlusB, ChainMember };

struct InitSpec {
    std::vector<QubitInit> qubits;
    /// Single-qubit state of each chain member before pair post-selection, in the
    /// (|+>_B, |->_B) frame. Chain members are assumed post-selected onto S^B_i S^B_j = +1.
    std::array<Complex, 2> chain_coeffs{1, 0};
};

struct DeterministicTile {
    int tile_id;
    int expected;
};

/// Tiles whose first-round noiseless outcome is fixed by the preparation, with that outcome.
std::vector<DeterministicTile> deterministic_tiles(const RotatedSurfaceLayout &layout, const InitSpec &spec,
                                                   const OperatorBasis &basis);

struct LayoutReport {
    std::vector<std::string> violations;
    bool ok() const {
        return violations.empty();
    }
};

/// Checks geometry invariants and tile/logical commutation numerically (dense matrices for
/// d = 2, random-state conjugation for larger patches).
LayoutReport validate_layout(const RotatedSurfaceLayout &layout);

/// Number of shared qubits between two sorted index lists.
std::size_t overlap(std::span<const std::size_t> a, std::span<const std::size_t> b);

/// Solves a linear system over GF(2). Row k is (mask of variables, rhs bit). Free variables are
/// set to zero. Returns nullopt when inconsistent.
std::optional<std::uint64_t> solve_gf2(std::vector<std::pair<std::uint64_t, int>> rows, std::size_t num_vars);

/// Logical basis of the syndrome sector with the given per-tile outcomes (indexed like
/// layout.tiles). |0_L> is the sector projection of a U-rotated computational product state with
/// even parity along the z chain; |1_L> = X_L |0_L> with X_L on the x chain.
struct SectorBasis {
    StateVector zero;
    StateVector one;
};

SectorBasis logical_basis(const RotatedSurfaceLayout &layout, const OperatorBasis &basis,
                          std::span<const int> tile_outcomes);
/// Code-space (all tiles +1) logical basis.
SectorBasis logical_basis(const RotatedSurfaceLayout &layout, const OperatorBasis &basis);

/// (<0_L|psi>, <1_L|psi>) over the data register; psi may carry extra high qubits in |0>.
std::array<Complex, 2> logical_amplitudes(const SectorBasis &sector, const StateVector &psi);

/// alpha|0_L> + beta|1_L> in the code space, data qubits only.
StateVector code_state(const RotatedSurfaceLayout &layout, const OperatorBasis &basis, Complex alpha, Complex beta);

}  // namespace nps

#endif
