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

#ifndef NPS_MEASUREMENT_CIRCUITS_H
#define NPS_MEASUREMENT_CIRCUITS_H

#include <cstddef>
#include <functional>
#include <vector>

#include "nps/code_lattice.h"
#include "nps/noise_model.h"
#include "nps/statevector.h"

namespace nps {

struct MeasurementRecord {
    /// Tile id, or -1 for a temporary pair / generic operator.
    int tile_id = -1;
    std::size_t pair_i = 0;
    std::size_t pair_j = 0;
    int outcome = +1;
    int round = 0;
    bool discarded = false;
};

/// Hadamard test of a tensor-product involution.
///
/// Circuit: reset hook, H(anc), noise, controlled factors in ascending qubit order (each followed
/// by the two-qubit hook on its target), H(anc), noise, readout, reset to |0>.
/// Returns (-1)^bit. Throws std::logic_error if the ancilla does not start in |0>.
int measure_operator(StateVector &state, const OperatorString &ops, std::size_t ancilla, TrialContext &ctx,
                     ReadoutKind kind = ReadoutKind::Tile);

int measure_stabilizer(StateVector &state, const StabilizerTile &tile, const OperatorBasis &basis,
                       std::size_t ancilla, TrialContext &ctx, std::size_t offset = 0);

/// S^B_i S^B_j on two distinct data qubits.
int measure_temporary_pair(StateVector &state, std::size_t qi, std::size_t qj, const OperatorBasis &basis,
                           std::size_t ancilla, TrialContext &ctx);

struct DoubleMeasurement {
    int first = +1;
    int second = +1;
    bool discarded = false;
};

/// Measures a tile twice; discarded iff the rounds disagree. `between` runs between the rounds.
DoubleMeasurement double_measure_with_discard(StateVector &state, const StabilizerTile &tile,
                                              const OperatorBasis &basis, std::size_t ancilla, TrialContext &ctx,
                                              const std::function<void(StateVector &)> &between = {});

}  // namespace nps

#endif
