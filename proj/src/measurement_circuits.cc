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

#include "nps/measurement_circuits.h"

#include <algorithm>
#include <stdexcept>

namespace nps {

int measure_operator(StateVector &state, const OperatorString &ops, std::size_t ancilla, TrialContext &ctx,
                     ReadoutKind kind) {
    if (state.probability_one(ancilla) > 1e-12) {
        throw std::logic_error("measurement ancilla is not in |0>");
    }
    OperatorString sorted = ops;
    std::sort(sorted.begin(), sorted.end(), [](const QubitOp &a, const QubitOp &b) { return a.qubit < b.qubit; });

    ctx.after_gate(state, ancilla, SiteKind::Reset);
    state.apply(gates::H(), ancilla);
    ctx.after_gate(state, ancilla, SiteKind::AncillaGate);
    for (const auto &op : sorted) {
        state.apply_controlled(op.gate, ancilla, op.qubit);
        ctx.after_gate(state, op.qubit, SiteKind::ControlledGate);
    }
    state.apply(gates::H(), ancilla);
    ctx.after_gate(state, ancilla, SiteKind::AncillaGate);
    const int bit = ctx.readout(state, ancilla, kind);
    if (bit) {
        state.apply(gates::X(), ancilla);
    }
    return bit ? -1 : +1;
}

int measure_stabilizer(StateVector &state, const StabilizerTile &tile, const OperatorBasis &basis,
                       std::size_t ancilla, TrialContext &ctx, std::size_t offset) {
    return measure_operator(state, tile_operator(tile, basis, offset), ancilla, ctx, ReadoutKind::Tile);
}

int measure_temporary_pair(StateVector &state, std::size_t qi, std::size_t qj, const OperatorBasis &basis,
                           std::size_t ancilla, TrialContext &ctx) {
    if (qi == qj) {
        throw std::invalid_argument("temporary pair needs two distinct qubits");
    }
    const OperatorString ops{{qi, basis.s_b}, {qj, basis.s_b}};
    return measure_operator(state, ops, ancilla, ctx, ReadoutKind::Pair);
}

DoubleMeasurement double_measure_with_discard(StateVector &state, const StabilizerTile &tile,
                                              const OperatorBasis &basis, std::size_t ancilla, TrialContext &ctx,
                                              const std::function<void(StateVector &)> &between) {
    DoubleMeasurement m;
    m.first = measure_stabilizer(state, tile, basis, ancilla, ctx);
    if (between) {
        between(state);
    }
    m.second = measure_stabilizer(state, tile, basis, ancilla, ctx);
    m.discarded = m.first != m.second;
    return m;
}

}  // namespace nps
