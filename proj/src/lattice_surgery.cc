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

#include "nps/lattice_surgery.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>

#include "nps/measurement_circuits.h"

namespace nps {

namespace {

bool contains(const std::vector<std::size_t> &v, std::size_t x) {
    return std::find(v.begin(), v.end(), x) != v.end();
}

bool anticommute(const StabilizerTile &a, const StabilizerTile &b) {
    return a.kind != b.kind && (overlap(a.qubits, b.qubits) % 2) == 1;
}

// Compositions of n into parts of size 1 or 2; more parts first, then lexicographic.
std::vector<std::vector<std::size_t>> compositions(std::size_t n) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> cur;
    std::function<void(std::size_t)> rec = [&](std::size_t left) {
        if (left == 0) {
            out.push_back(cur);
            return;
        }
        for (std::size_t s = 1; s <= 2 && s <= left; s++) {
            cur.push_back(s);
            rec(left - s);
            cur.pop_back();
        }
    };
    rec(n);
    std::stable_sort(out.begin(), out.end(), [](const auto &a, const auto &b) {
        if (a.size() != b.size()) {
            return a.size() > b.size();
        }
        return a < b;
    });
    return out;
}

// Product state with each local state placed at its qubit offset; other qubits in |0>.
StateVector place(std::size_t num_qubits, const std::vector<std::pair<const StateVector *, std::size_t>> &parts) {
    std::vector<std::pair<std::size_t, Complex>> terms{{0, 1}};
    for (const auto &[sv, off] : parts) {
        std::vector<std::pair<std::size_t, Complex>> next;
        for (const auto &[idx, a] : terms) {
            for (std::size_t i = 0; i < sv->dimension(); i++) {
                const Complex b = sv->amplitude(i);
                if (b != Complex(0, 0)) {
                    next.push_back({idx | (i << off), a * b});
                }
            }
        }
        terms = std::move(next);
    }
    std::vector<Complex> amps(std::size_t{1} << num_qubits);
    for (const auto &[idx, a] : terms) {
        amps[idx] += a;
    }
    return StateVector::from_amplitudes(std::move(amps));
}

StateVector local_code_state(const SurgeryPatch &patch, std::array<Complex, 2> psi) {
    return code_state(patch.layout, patch.basis, psi[0], psi[1]);
}

// Coefficients of psi in the eigenbasis {e0, L e0} of the patch side of the joint logical.
std::array<Complex, 2> in_seam_frame(BoundaryKind kind, std::array<Complex, 2> psi) {
    if (kind == BoundaryKind::Rough) {
        return psi;  // e0 = |0>, X|0> = |1>
    }
    const double r = 1 / std::sqrt(2.0);
    return {r * (psi[0] + psi[1]), r * (psi[0] - psi[1])};  // e0 = |+>, Z|+> = |->
}

std::array<Complex, 2> frame_vector(BoundaryKind kind) {
    const double r = 1 / std::sqrt(2.0);
    return kind == BoundaryKind::Rough ? std::array<Complex, 2>{1, 0} : std::array<Complex, 2>{r, r};
}

// L psi, with L = X_L (rough) or Z_L (smooth), in logical amplitudes.
std::array<Complex, 2> apply_side_logical(BoundaryKind kind, std::array<Complex, 2> psi) {
    if (kind == BoundaryKind::Rough) {
        return {psi[1], psi[0]};
    }
    return {psi[0], -psi[1]};
}

StateVector random_state(std::size_t n, RngStream &rng) {
    std::vector<Complex> amps(std::size_t{1} << n);
    for (auto &a : amps) {
        a = Complex(rng.uniform() - 0.5, rng.uniform() - 0.5);
    }
    return StateVector::from_amplitudes(std::move(amps));
}

OperatorString remap(const OperatorString &ops, const std::map<std::size_t, std::size_t> &local) {
    OperatorString out;
    for (const auto &op : ops) {
        out.push_back({local.at(op.qubit), op.gate});
    }
    return out;
}

double max_diff(const StateVector &a, const StateVector &b) {
    double worst = 0;
    for (std::size_t i = 0; i < a.dimension(); i++) {
        worst = std::max(worst, std::abs(a.amplitude(i) - b.amplitude(i)));
    }
    return worst;
}

}  // namespace

const char *boundary_kind_name(BoundaryKind kind) {
    return kind == BoundaryKind::Rough ? "rough" : "smooth";
}

StabilizerTile SurgeryPatch::global_tile(const StabilizerTile &tile) const {
    StabilizerTile g = tile;
    for (auto &q : g.qubits) {
        q += offset;
    }
    return g;
}

OperatorString SurgeryPatch::logical_x() const {
    return logical_operator(logical_chains(layout).x_chain, basis, offset);
}

OperatorString SurgeryPatch::logical_z() const {
    return logical_operator(logical_chains(layout).z_chain, basis, offset);
}

const OperatorBasis &MergedLayout::basis_of(std::size_t qubit) const {
    const std::size_t n = distance * distance;
    if (qubit >= patch_p.offset && qubit < patch_p.offset + n) {
        return patch_p.basis;
    }
    if (qubit >= patch_q.offset && qubit < patch_q.offset + n) {
        return patch_q.basis;
    }
    throw std::out_of_range("qubit " + std::to_string(qubit) + " belongs to neither patch");
}

OperatorString MergedLayout::op(const StabilizerTile &tile) const {
    OperatorString ops;
    for (std::size_t q : tile.qubits) {
        const OperatorBasis &b = basis_of(q);
        ops.push_back({q, tile.kind == TileKind::A ? b.s_a : b.s_b});
    }
    return ops;
}

OperatorString MergedLayout::joint_logical() const {
    StabilizerTile t{-1, boundary == BoundaryKind::Rough ? TileKind::A : TileKind::B, {}};
    t.qubits = boundary_p;
    t.qubits.insert(t.qubits.end(), boundary_q.begin(), boundary_q.end());
    std::sort(t.qubits.begin(), t.qubits.end());
    return op(t);
}

std::vector<StabilizerTile> MergedLayout::patch_tiles() const {
    std::vector<StabilizerTile> out;
    for (const auto &t : patch_p.layout.tiles) {
        out.push_back(patch_p.global_tile(t));
    }
    for (const auto &t : patch_q.layout.tiles) {
        out.push_back(patch_q.global_tile(t));
    }
    return out;
}

std::vector<StabilizerTile> MergedLayout::merged_code_tiles() const {
    std::vector<StabilizerTile> out;
    for (std::size_t k = 0; k < patch_p.layout.tiles.size(); k++) {
        if (!contains(removed_p, k)) {
            out.push_back(patch_p.global_tile(patch_p.layout.tiles[k]));
        }
    }
    for (std::size_t k = 0; k < patch_q.layout.tiles.size(); k++) {
        if (!contains(removed_q, k)) {
            out.push_back(patch_q.global_tile(patch_q.layout.tiles[k]));
        }
    }
    out.insert(out.end(), merged_tiles.begin(), merged_tiles.end());
    out.insert(out.end(), seam_tiles.begin(), seam_tiles.end());
    return out;
}

std::string MergedLayout::describe() const {
    std::ostringstream os;
    os << boundary_kind_name(boundary) << " merge, d=" << distance << ", P offset " << patch_p.offset
       << (patch_p.layout.flipped ? " (flipped)" : "") << ", Q offset " << patch_q.offset
       << (patch_q.layout.flipped ? " (flipped)" : "") << "\n";
    os << "  blocks:";
    for (std::size_t b : blocks) {
        os << ' ' << b;
    }
    os << "\n";
    const auto dump = [&](const char *name, const StabilizerTile &t) {
        os << "  " << name << ' ' << tile_kind_char(t.kind) << " [";
        for (std::size_t k = 0; k < t.qubits.size(); k++) {
            os << (k ? " " : "") << t.qubits[k];
        }
        os << "]\n";
    };
    for (const auto &t : seam_tiles) {
        dump("seam", t);
    }
    for (const auto &t : merged_tiles) {
        dump("merged", t);
    }
    for (std::size_t k : removed_p) {
        dump("removed P", patch_p.global_tile(patch_p.layout.tiles[k]));
    }
    for (std::size_t k : removed_q) {
        dump("removed Q", patch_q.global_tile(patch_q.layout.tiles[k]));
    }
    return os.str();
}

MergedLayout build_merged_layout(std::size_t d, BoundaryKind kind, const OperatorBasis &basis_p,
                                 const OperatorBasis &basis_q, std::size_t offset_p, std::size_t offset_q,
                                 bool p_flipped, std::size_t ancilla) {
    const std::size_t n = d * d;
    if (offset_q == static_cast<std::size_t>(-1)) {
        offset_q = offset_p + n;
    }
    if (ancilla == static_cast<std::size_t>(-1)) {
        ancilla = std::max(offset_p, offset_q) + n;
    }
    if ((offset_p < offset_q && offset_p + n > offset_q) || (offset_q < offset_p && offset_q + n > offset_p) ||
        offset_p == offset_q) {
        throw std::invalid_argument("patches overlap");
    }
    const TileKind seam_kind = kind == BoundaryKind::Rough ? TileKind::A : TileKind::B;
    const TileKind other_kind = kind == BoundaryKind::Rough ? TileKind::B : TileKind::A;

    for (bool q_flipped : {p_flipped, !p_flipped}) {
        MergedLayout m;
        m.distance = d;
        m.boundary = kind;
        m.patch_p = {build_layout(d, p_flipped), basis_p, offset_p};
        m.patch_q = {build_layout(d, q_flipped), basis_q, offset_q};
        m.ancilla = ancilla;
        for (std::size_t k = 0; k < d; k++) {
            if (kind == BoundaryKind::Rough) {
                m.boundary_p.push_back(offset_p + m.patch_p.layout.qubit_at(k, d - 1));
                m.boundary_q.push_back(offset_q + m.patch_q.layout.qubit_at(k, 0));
            } else {
                m.boundary_p.push_back(offset_p + m.patch_p.layout.qubit_at(d - 1, k));
                m.boundary_q.push_back(offset_q + m.patch_q.layout.qubit_at(0, k));
            }
        }

        for (const auto &blocks : compositions(d)) {
            std::vector<StabilizerTile> seams;
            std::size_t pos = 0;
            for (std::size_t b : blocks) {
                StabilizerTile t{static_cast<int>(seams.size()), seam_kind, {}};
                for (std::size_t k = pos; k < pos + b; k++) {
                    t.qubits.push_back(m.boundary_p[k]);
                    t.qubits.push_back(m.boundary_q[k]);
                }
                std::sort(t.qubits.begin(), t.qubits.end());
                seams.push_back(std::move(t));
                pos += b;
            }

            // Tiles of either patch that anticommute with a seam tile must be facing-boundary
            // weight-2 tiles of the other kind.
            bool valid = true;
            std::vector<std::size_t> removed_p, removed_q;
            std::vector<StabilizerTile> removed;
            for (int side = 0; side < 2 && valid; side++) {
                const SurgeryPatch &patch = side == 0 ? m.patch_p : m.patch_q;
                const auto &facing = side == 0 ? m.boundary_p : m.boundary_q;
                for (std::size_t k = 0; k < patch.layout.tiles.size(); k++) {
                    const StabilizerTile g = patch.global_tile(patch.layout.tiles[k]);
                    const bool hit =
                        std::any_of(seams.begin(), seams.end(), [&](const auto &s) { return anticommute(g, s); });
                    if (!hit) {
                        continue;
                    }
                    if (g.kind != other_kind || g.qubits.size() != 2 || !contains(facing, g.qubits[0]) ||
                        !contains(facing, g.qubits[1])) {
                        valid = false;
                        break;
                    }
                    (side == 0 ? removed_p : removed_q).push_back(k);
                    removed.push_back(g);
                }
            }
            if (!valid) {
                continue;
            }

            // Nullspace of the removed-vs-seam anticommutation relation over GF(2).
            const std::size_t nr = removed.size();
            std::vector<std::uint64_t> rows;
            for (const auto &s : seams) {
                std::uint64_t mask = 0;
                for (std::size_t r = 0; r < nr; r++) {
                    if (anticommute(removed[r], s)) {
                        mask |= std::uint64_t{1} << r;
                    }
                }
                rows.push_back(mask);
            }
            std::vector<std::size_t> pivots;
            std::size_t rank = 0;
            for (std::size_t col = 0; col < nr && rank < rows.size(); col++) {
                std::size_t p = rank;
                while (p < rows.size() && !((rows[p] >> col) & 1)) {
                    p++;
                }
                if (p == rows.size()) {
                    continue;
                }
                std::swap(rows[rank], rows[p]);
                for (std::size_t k = 0; k < rows.size(); k++) {
                    if (k != rank && ((rows[k] >> col) & 1)) {
                        rows[k] ^= rows[rank];
                    }
                }
                pivots.push_back(col);
                rank++;
            }
            std::vector<StabilizerTile> merged;
            for (std::size_t free = 0; free < nr; free++) {
                if (contains(pivots, free)) {
                    continue;
                }
                std::uint64_t vec = std::uint64_t{1} << free;
                for (std::size_t k = 0; k < rank; k++) {
                    if ((rows[k] >> free) & 1) {
                        vec |= std::uint64_t{1} << pivots[k];
                    }
                }
                std::set<std::size_t> qs;
                for (std::size_t r = 0; r < nr; r++) {
                    if ((vec >> r) & 1) {
                        for (std::size_t q : removed[r].qubits) {
                            if (!qs.erase(q)) {
                                qs.insert(q);
                            }
                        }
                    }
                }
                merged.push_back({static_cast<int>(merged.size()), other_kind, {qs.begin(), qs.end()}});
            }

            const std::size_t generators = m.patch_p.layout.tiles.size() + m.patch_q.layout.tiles.size() -
                                           removed_p.size() - removed_q.size() + merged.size() + seams.size();
            if (generators != 2 * n - 1) {
                continue;
            }
            m.seam_tiles = std::move(seams);
            m.merged_tiles = std::move(merged);
            m.removed_p = std::move(removed_p);
            m.removed_q = std::move(removed_q);
            m.blocks = blocks;
            if (!validate_merged_layout(m).ok()) {
                continue;
            }
            return m;
        }
    }
    throw std::logic_error("no valid seam tiling for d=" + std::to_string(d) + " " + boundary_kind_name(kind) +
                           " merge");
}

MergedLayoutReport validate_merged_layout(const MergedLayout &merged) {
    MergedLayoutReport rep;
    const std::size_t n = merged.distance * merged.distance;
    std::map<std::size_t, std::size_t> local;
    for (std::size_t k = 0; k < n; k++) {
        local[merged.patch_p.offset + k] = k;
        local[merged.patch_q.offset + k] = n + k;
    }
    const std::size_t width = 2 * n;
    const bool dense = width <= 8;

    std::vector<StabilizerTile> tiles = merged.merged_code_tiles();
    rep.generator_count = tiles.size();
    std::vector<OperatorString> ops;
    for (const auto &t : tiles) {
        ops.push_back(remap(merged.op(t), local));
    }

    RngStream rng(0xC0FFEE, width);
    std::vector<StateVector> probes;
    if (!dense) {
        probes.push_back(random_state(width, rng));
    }
    for (std::size_t x = 0; x < ops.size(); x++) {
        for (std::size_t y = x + 1; y < ops.size(); y++) {
            if (overlap(tiles[x].qubits, tiles[y].qubits) == 0) {
                continue;  // disjoint supports
            }
            double r;
            if (dense) {
                r = commutator_residual(ops[x], ops[y], width);
            } else {
                r = 0;
                for (const auto &psi : probes) {
                    StateVector ab = psi, ba = psi;
                    ab.apply_string(ops[y]);
                    ab.apply_string(ops[x]);
                    ba.apply_string(ops[x]);
                    ba.apply_string(ops[y]);
                    r = std::max(r, max_diff(ab, ba));
                }
            }
            rep.max_commutator = std::max(rep.max_commutator, r);
        }
    }

    // Seam product against the joint logical: every computational basis state when dense,
    // random states otherwise.
    OperatorString product;
    for (const auto &s : merged.seam_tiles) {
        const auto o = remap(merged.op(s), local);
        product.insert(product.end(), o.begin(), o.end());
    }
    const OperatorString joint = remap(merged.joint_logical(), local);
    std::vector<StateVector> inputs;
    if (dense) {
        for (std::size_t i = 0; i < (std::size_t{1} << width); i++) {
            std::vector<Complex> amps(std::size_t{1} << width);
            amps[i] = 1;
            inputs.push_back(StateVector::from_amplitudes(std::move(amps)));
        }
    } else {
        inputs.push_back(random_state(width, rng));
        inputs.push_back(random_state(width, rng));
    }
    for (const auto &psi : inputs) {
        StateVector a = psi, b = psi;
        a.apply_string(product);
        b.apply_string(joint);
        rep.product_residual = std::max(rep.product_residual, max_diff(a, b));
    }
    return rep;
}

MergeOutcome merge_measure(StateVector &state, const MergedLayout &merged, TrialContext &ctx, std::size_t rounds) {
    if (rounds == 0) {
        rounds = merged.distance;
    }
    MergeOutcome out;
    out.rounds = rounds;
    std::vector<int> tally(merged.seam_tiles.size(), 0);
    for (std::size_t r = 0; r < rounds; r++) {
        for (std::size_t k = 0; k < merged.seam_tiles.size(); k++) {
            tally[k] += measure_operator(state, merged.op(merged.seam_tiles[k]), merged.ancilla, ctx,
                                         ReadoutKind::Seam);
        }
    }
    int parity = 0;
    for (std::size_t k = 0; k < merged.seam_tiles.size(); k++) {
        while (tally[k] == 0) {
            tally[k] += measure_operator(state, merged.op(merged.seam_tiles[k]), merged.ancilla, ctx,
                                         ReadoutKind::Seam);
        }
        const int v = tally[k] > 0 ? +1 : -1;
        out.seam_outcomes.push_back(v);
        parity ^= v < 0 ? 1 : 0;
    }
    out.m = parity;
    return out;
}

SplitRecord split(StateVector &state, const MergedLayout &merged, TrialContext &ctx) {
    SplitRecord rec;
    std::vector<std::pair<std::uint64_t, int>> rows;
    const auto tiles = merged.patch_tiles();
    for (const auto &t : tiles) {
        const int out = measure_operator(state, merged.op(t), merged.ancilla, ctx, ReadoutKind::Split);
        rec.patch_outcomes.push_back(out);
        std::uint64_t mask = 0;
        for (std::size_t s = 0; s < merged.seam_tiles.size(); s++) {
            if (anticommute(t, merged.seam_tiles[s])) {
                mask |= std::uint64_t{1} << s;
            }
        }
        rows.push_back({mask, out < 0 ? 1 : 0});
    }
    const auto fix = solve_gf2(rows, merged.seam_tiles.size());
    if (!fix) {
        throw std::logic_error("split syndrome cannot be corrected by seam operators");
    }
    for (std::size_t s = 0; s < merged.seam_tiles.size(); s++) {
        if ((*fix >> s) & 1) {
            state.apply_string(merged.op(merged.seam_tiles[s]));
            rec.corrections.push_back(s);
        }
    }
    return rec;
}

StateVector two_patch_state(const MergedLayout &merged, std::array<Complex, 2> psi_p, std::array<Complex, 2> psi_q) {
    const StateVector p = local_code_state(merged.patch_p, psi_p);
    const StateVector q = local_code_state(merged.patch_q, psi_q);
    return place(merged.num_qubits(), {{&p, merged.patch_p.offset}, {&q, merged.patch_q.offset}});
}

StateVector merged_state_reference(const MergedLayout &merged, std::array<Complex, 2> psi_p,
                                   std::array<Complex, 2> psi_q, const std::vector<int> &seam_outcomes,
                                   ReferenceRoute route) {
    if (seam_outcomes.size() != merged.seam_tiles.size()) {
        throw std::invalid_argument("need one outcome per seam tile");
    }
    int m = 0;
    for (int s : seam_outcomes) {
        m ^= s < 0 ? 1 : 0;
    }
    const double sign = m ? -1.0 : 1.0;
    const BoundaryKind kind = merged.boundary;
    std::array<Complex, 2> p_part, q_part;
    if (route == ReferenceRoute::ViaQ) {
        const auto c = in_seam_frame(kind, psi_p);
        const auto lq = apply_side_logical(kind, psi_q);
        p_part = frame_vector(kind);
        q_part = {c[0] * psi_q[0] + sign * c[1] * lq[0], c[0] * psi_q[1] + sign * c[1] * lq[1]};
    } else {
        const auto c = in_seam_frame(kind, psi_q);
        const auto lp = apply_side_logical(kind, psi_p);
        q_part = frame_vector(kind);
        p_part = {c[0] * psi_p[0] + sign * c[1] * lp[0], c[0] * psi_p[1] + sign * c[1] * lp[1]};
    }
    StateVector state = two_patch_state(merged, p_part, q_part);
    for (std::size_t k = 0; k < merged.seam_tiles.size(); k++) {
        state.project_onto(merged.op(merged.seam_tiles[k]), seam_outcomes[k]);
    }
    return state;
}

StateVector split_state_reference(const MergedLayout &merged, std::array<Complex, 2> psi_p,
                                  std::array<Complex, 2> psi_q, int m) {
    StateVector state = two_patch_state(merged, psi_p, psi_q);
    state.project_onto(merged.joint_logical(), m ? -1 : +1);
    return state;
}

CnotSetup build_cnot_setup(const OperatorBasis &basis_q) {
    const std::size_t d = 2;
    const std::size_t n = d * d;
    CnotSetup s;
    s.ancilla = 3 * n;
    s.num_qubits = 3 * n + 1;
    s.smooth = build_merged_layout(d, BoundaryKind::Smooth, pauli_basis(), pauli_basis(), 0, n, false, s.ancilla);
    s.rough = build_merged_layout(d, BoundaryKind::Rough, pauli_basis(), basis_q, n, 2 * n,
                                  s.smooth.patch_q.layout.flipped, s.ancilla);
    return s;
}

CnotCorrection logical_cnot(StateVector &state, const CnotSetup &setup, TrialContext &ctx) {
    CnotCorrection c;
    c.m1 = merge_measure(state, setup.smooth, ctx).m;
    split(state, setup.smooth, ctx);
    c.m2 = merge_measure(state, setup.rough, ctx).m;
    split(state, setup.rough, ctx);
    const SurgeryPatch &r = setup.rough.patch_p;
    c.m3 = measure_operator(state, r.logical_z(), setup.ancilla, ctx, ReadoutKind::Logical) < 0 ? 1 : 0;
    c.x_on_q = (c.m1 ^ c.m3) != 0;
    c.z_on_p = c.m2 != 0;
    if (c.x_on_q) {
        state.apply_string(setup.rough.patch_q.logical_x());
    }
    if (c.z_on_p) {
        state.apply_string(setup.smooth.patch_p.logical_z());
    }
    return c;
}

StateVector cnot_input_state(const CnotSetup &setup, std::array<Complex, 2> psi_p, std::array<Complex, 2> psi_q) {
    const double r = 1 / std::sqrt(2.0);
    const StateVector p = local_code_state(setup.smooth.patch_p, psi_p);
    const StateVector a = local_code_state(setup.smooth.patch_q, {r, r});
    const StateVector q = local_code_state(setup.rough.patch_q, psi_q);
    return place(setup.num_qubits, {{&p, setup.smooth.patch_p.offset},
                                    {&a, setup.smooth.patch_q.offset},
                                    {&q, setup.rough.patch_q.offset}});
}

StateVector cnot_expected_state(const CnotSetup &setup, const std::array<Complex, 4> &in, int m3) {
    std::array<Complex, 4> out{};
    for (int i = 0; i < 2; i++) {
        for (int j = 0; j < 2; j++) {
            out[2 * i + (j ^ i)] += in[2 * i + j];
        }
    }
    const StateVector a = local_code_state(setup.smooth.patch_q, m3 ? std::array<Complex, 2>{0, 1}
                                                                     : std::array<Complex, 2>{1, 0});
    std::vector<Complex> amps(std::size_t{1} << setup.num_qubits);
    for (int i = 0; i < 2; i++) {
        for (int j = 0; j < 2; j++) {
            if (out[2 * i + j] == Complex(0, 0)) {
                continue;
            }
            const StateVector p = local_code_state(setup.smooth.patch_p, i ? std::array<Complex, 2>{0, 1}
                                                                            : std::array<Complex, 2>{1, 0});
            const StateVector q = local_code_state(setup.rough.patch_q, j ? std::array<Complex, 2>{0, 1}
                                                                           : std::array<Complex, 2>{1, 0});
            const StateVector term = place(setup.num_qubits, {{&p, setup.smooth.patch_p.offset},
                                                              {&a, setup.smooth.patch_q.offset},
                                                              {&q, setup.rough.patch_q.offset}});
            for (std::size_t k = 0; k < amps.size(); k++) {
                amps[k] += out[2 * i + j] * term.amplitude(k);
            }
        }
    }
    return StateVector::from_amplitudes(std::move(amps));
}

double MergeVerification::worst_fidelity() const {
    double w = 1;
    for (const auto &b : branches) {
        w = std::min({w, b.merged_fidelity, b.split_fidelity});
    }
    return branches.empty() ? 0 : w;
}

double MergeVerification::worst_route_gap() const {
    double w = 0;
    for (const auto &b : branches) {
        w = std::max(w, b.route_gap);
    }
    return w;
}

bool MergeVerification::saw_m(int m) const {
    return std::any_of(branches.begin(), branches.end(), [&](const MergeBranch &b) { return b.m == m; });
}

MergeVerification verify_merge(const MergedLayout &merged, std::array<Complex, 2> psi_p,
                               std::array<Complex, 2> psi_q, bool exhaustive, std::size_t samples,
                               std::uint64_t seed) {
    MergeVerification out;
    const StateVector input = two_patch_state(merged, psi_p, psi_q);
    const auto run = [&](TrialContext &ctx) {
        StateVector state = input;
        const MergeOutcome mo = merge_measure(state, merged, ctx);
        MergeBranch b;
        b.m = mo.m;
        b.seam_outcomes = mo.seam_outcomes;
        const StateVector via_q = merged_state_reference(merged, psi_p, psi_q, mo.seam_outcomes, ReferenceRoute::ViaQ);
        const StateVector via_p = merged_state_reference(merged, psi_p, psi_q, mo.seam_outcomes, ReferenceRoute::ViaP);
        b.merged_fidelity = fidelity(state, via_q);
        b.route_gap = 1 - fidelity(via_q, via_p);
        split(state, merged, ctx);
        b.split_fidelity = fidelity(state, split_state_reference(merged, psi_p, psi_q, mo.m));
        out.branches.push_back(std::move(b));
    };
    if (exhaustive) {
        std::optional<std::vector<int>> script = std::vector<int>{};
        while (script) {
            TrialContext ctx(seed, 0, NoiseChannel::noiseless(), merged.patch_q.basis);
            ctx.set_script(*script);
            run(ctx);
            script = next_branch_script(ctx.decisions(), [](ReadoutKind) { return true; });
        }
    } else {
        for (std::size_t s = 0; s < samples; s++) {
            TrialContext ctx(seed, s, NoiseChannel::noiseless(), merged.patch_q.basis);
            run(ctx);
        }
    }
    return out;
}

std::vector<CnotBranch> verify_cnot(const CnotSetup &setup, std::array<Complex, 2> psi_p,
                                    std::array<Complex, 2> psi_q) {
    const StateVector input = cnot_input_state(setup, psi_p, psi_q);
    const std::array<Complex, 4> two{psi_p[0] * psi_q[0], psi_p[0] * psi_q[1], psi_p[1] * psi_q[0],
                                     psi_p[1] * psi_q[1]};
    std::vector<CnotBranch> out;
    std::optional<std::vector<int>> script = std::vector<int>{};
    while (script) {
        TrialContext ctx(1, 0, NoiseChannel::noiseless(), setup.rough.patch_q.basis);
        ctx.set_script(*script);
        StateVector state = input;
        CnotBranch b;
        b.correction = logical_cnot(state, setup, ctx);
        b.fidelity = fidelity(state, cnot_expected_state(setup, two, b.correction.m3));
        out.push_back(b);
        script = next_branch_script(ctx.decisions(), [](ReadoutKind) { return true; });
    }
    return out;
}

}  // namespace nps
