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

#include "nps/code_lattice.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace nps {

char tile_kind_char(TileKind kind) {
    return kind == TileKind::A ? 'A' : 'B';
}

const StabilizerTile &RotatedSurfaceLayout::tile(int tile_id) const {
    for (const auto &t : tiles) {
        if (t.tile_id == tile_id) {
            return t;
        }
    }
    throw std::out_of_range("no tile with id " + std::to_string(tile_id));
}

std::vector<std::size_t> RotatedSurfaceLayout::canonical_order() const {
    std::vector<std::size_t> order;
    for (TileKind kind : {TileKind::A, TileKind::B}) {
        std::vector<std::size_t> of_kind;
        for (std::size_t k = 0; k < tiles.size(); k++) {
            if (tiles[k].kind == kind) {
                of_kind.push_back(k);
            }
        }
        std::sort(of_kind.begin(), of_kind.end(),
                  [&](std::size_t a, std::size_t b) { return tiles[a].tile_id < tiles[b].tile_id; });
        order.insert(order.end(), of_kind.begin(), of_kind.end());
    }
    return order;
}

RotatedSurfaceLayout build_layout(std::size_t d, bool flipped) {
    if (d < 2 || d > 4) {
        throw std::invalid_argument("distance " + std::to_string(d) + " outside supported range [2, 4]");
    }
    RotatedSurfaceLayout layout;
    layout.distance = d;
    layout.flipped = flipped;
    for (std::size_t r = 0; r < d; r++) {
        for (std::size_t c = 0; c < d; c++) {
            layout.data_qubits.push_back({r, c});
        }
    }
    layout.ancilla_index = d * d;

    // Plaquette (i, j) sits on the corner shared by rows i-1, i and columns j-1, j.
    int next_id = 0;
    for (std::size_t i = 0; i <= d; i++) {
        for (std::size_t j = 0; j <= d; j++) {
            const bool a_type = ((i + j + (flipped ? 1 : 0)) % 2) == 0;
            std::vector<std::size_t> qs;
            for (std::size_t r : {i - 1, i}) {
                for (std::size_t c : {j - 1, j}) {
                    if (r < d && c < d) {  // wraps to SIZE_MAX when i or j is 0
                        qs.push_back(layout.qubit_at(r, c));
                    }
                }
            }
            if (qs.size() == 2) {
                const bool horizontal_edge = (i == 0 || i == d);
                if (horizontal_edge != a_type) {
                    continue;
                }
            } else if (qs.size() != 4) {
                continue;
            }
            std::sort(qs.begin(), qs.end());
            layout.tiles.push_back({next_id++, a_type ? TileKind::A : TileKind::B, std::move(qs)});
        }
    }
    return layout;
}

LogicalOperator x_chain_on_column(const RotatedSurfaceLayout &layout, std::size_t col) {
    LogicalOperator op{TileKind::A, {}};
    for (std::size_t r = 0; r < layout.distance; r++) {
        op.qubits.push_back(layout.qubit_at(r, col));
    }
    return op;
}

LogicalOperator z_chain_on_row(const RotatedSurfaceLayout &layout, std::size_t row) {
    LogicalOperator op{TileKind::B, {}};
    for (std::size_t c = 0; c < layout.distance; c++) {
        op.qubits.push_back(layout.qubit_at(row, c));
    }
    return op;
}

LogicalChains logical_chains(const RotatedSurfaceLayout &layout) {
    return {x_chain_on_column(layout, 0), z_chain_on_row(layout, 0)};
}

OperatorString tile_operator(const StabilizerTile &tile, const OperatorBasis &basis, std::size_t offset) {
    OperatorString ops;
    const Gate2x2 &g = tile.kind == TileKind::A ? basis.s_a : basis.s_b;
    for (std::size_t q : tile.qubits) {
        ops.push_back({q + offset, g});
    }
    return ops;
}

OperatorString logical_operator(const LogicalOperator &op, const OperatorBasis &basis, std::size_t offset) {
    return tile_operator(StabilizerTile{-1, op.kind, op.qubits}, basis, offset);
}

std::vector<DeterministicTile> deterministic_tiles(const RotatedSurfaceLayout &layout, const InitSpec &spec,
                                                   const OperatorBasis &basis) {
    if (spec.qubits.size() != layout.num_data()) {
        throw std::invalid_argument("init description must cover every data qubit");
    }
    // Everything is evaluated in the U-rotated frame where S^B -> Z and S^A -> X.
    const double r = 1.0 / std::sqrt(2.0);
    std::vector<std::array<Complex, 2>> single(layout.num_data());
    std::vector<bool> in_chain(layout.num_data(), false);
    std::size_t chain_size = 0;
    for (std::size_t q = 0; q < layout.num_data(); q++) {
        switch (spec.qubits[q]) {
            case QubitInit::Ground:
                single[q] = {basis.ground_coeff_plus, basis.ground_coeff_minus};
                break;
            case QubitInit::PlusB:
                single[q] = {1, 0};
                break;
            case QubitInit::PlusA:
                single[q] = {r, r};
                break;
            case QubitInit::ChainMember:
                in_chain[q] = true;
                chain_size++;
                break;
        }
    }
    const auto ez = [](std::array<Complex, 2> v) { return std::norm(v[0]) - std::norm(v[1]); };
    const auto ex = [](std::array<Complex, 2> v) { return 2 * std::real(std::conj(v[0]) * v[1]); };

    // Post-selected chain: alpha |+...+>_B + beta |-...->_B.
    Complex alpha = 0, beta = 0;
    if (chain_size > 0) {
        alpha = std::pow(spec.chain_coeffs[0], static_cast<double>(chain_size));
        beta = std::pow(spec.chain_coeffs[1], static_cast<double>(chain_size));
        const double n = std::sqrt(std::norm(alpha) + std::norm(beta));
        if (n == 0) {
            throw std::invalid_argument("chain coefficients are zero");
        }
        alpha /= n;
        beta /= n;
    }

    std::vector<DeterministicTile> out;
    for (const auto &tile : layout.tiles) {
        double e = 1;
        std::size_t chain_hits = 0;
        for (std::size_t q : tile.qubits) {
            if (in_chain[q]) {
                chain_hits++;
            } else {
                e *= tile.kind == TileKind::B ? ez(single[q]) : ex(single[q]);
            }
        }
        if (chain_hits > 0) {
            if (tile.kind == TileKind::B) {
                e *= std::norm(alpha) + ((chain_hits % 2) ? -1.0 : 1.0) * std::norm(beta);
            } else if (chain_hits == chain_size) {
                e *= 2 * std::real(std::conj(alpha) * beta);
            } else {
                e = 0;
            }
        }
        if (std::abs(e) >= 1 - 1e-9) {
            out.push_back({tile.tile_id, e > 0 ? +1 : -1});
        }
    }
    return out;
}

std::size_t overlap(std::span<const std::size_t> a, std::span<const std::size_t> b) {
    std::size_t n = 0;
    for (std::size_t x : a) {
        n += std::count(b.begin(), b.end(), x);
    }
    return n;
}

std::optional<std::uint64_t> solve_gf2(std::vector<std::pair<std::uint64_t, int>> rows, std::size_t num_vars) {
    if (num_vars > 64) {
        throw std::invalid_argument("GF(2) solver limited to 64 variables");
    }
    std::vector<std::size_t> pivot_col;
    std::size_t rank = 0;
    for (std::size_t col = 0; col < num_vars && rank < rows.size(); col++) {
        const std::uint64_t bit = std::uint64_t{1} << col;
        std::size_t pivot = rank;
        while (pivot < rows.size() && !(rows[pivot].first & bit)) {
            pivot++;
        }
        if (pivot == rows.size()) {
            continue;
        }
        std::swap(rows[rank], rows[pivot]);
        for (std::size_t k = 0; k < rows.size(); k++) {
            if (k != rank && (rows[k].first & bit)) {
                rows[k].first ^= rows[rank].first;
                rows[k].second ^= rows[rank].second;
            }
        }
        pivot_col.push_back(col);
        rank++;
    }
    for (std::size_t k = rank; k < rows.size(); k++) {
        if (rows[k].first == 0 && rows[k].second) {
            return std::nullopt;
        }
    }
    std::uint64_t solution = 0;
    for (std::size_t k = 0; k < rank; k++) {
        if (rows[k].second) {
            solution |= std::uint64_t{1} << pivot_col[k];
        }
    }
    return solution;
}

namespace {

StateVector random_state(std::size_t n, RngStream &rng) {
    std::vector<Complex> amps(std::size_t{1} << n);
    for (auto &a : amps) {
        a = Complex(rng.uniform() - 0.5, rng.uniform() - 0.5);
    }
    return StateVector::from_amplitudes(std::move(amps));
}

// max |A B psi - sign * B A psi| over a couple of random states.
double sampled_residual(const OperatorString &a, const OperatorString &b, std::size_t n, double sign) {
    RngStream rng(0x5eed, n);
    double worst = 0;
    for (int trial = 0; trial < 2; trial++) {
        const StateVector psi = random_state(n, rng);
        StateVector ab = psi;
        ab.apply_string(b);
        ab.apply_string(a);
        StateVector ba = psi;
        ba.apply_string(a);
        ba.apply_string(b);
        for (std::size_t i = 0; i < ab.dimension(); i++) {
            worst = std::max(worst, std::abs(ab.amplitude(i) - sign * ba.amplitude(i)));
        }
    }
    return worst;
}

}  // namespace

LayoutReport validate_layout(const RotatedSurfaceLayout &layout) {
    LayoutReport rep;
    const std::size_t d = layout.distance;
    const std::size_t n = layout.num_data();
    auto fail = [&](std::string msg) { rep.violations.push_back(std::move(msg)); };

    if (n != d * d) {
        fail("expected d^2 data qubits");
    }
    if (layout.tiles.size() + 1 != n) {
        fail("expected d^2 - 1 tiles, found " + std::to_string(layout.tiles.size()));
    }
    for (const auto &t : layout.tiles) {
        const std::string name = "tile " + std::to_string(t.tile_id);
        if (t.qubits.size() != 2 && t.qubits.size() != 4) {
            fail(name + " has weight " + std::to_string(t.qubits.size()));
        }
        for (std::size_t k = 0; k < t.qubits.size(); k++) {
            if (t.qubits[k] >= n) {
                fail(name + " references qubit out of range");
            }
            if (k > 0 && t.qubits[k] <= t.qubits[k - 1]) {
                fail(name + " qubits not distinct and ascending");
            }
        }
        if (t.qubits.size() == 2 && t.qubits[0] < n && t.qubits[1] < n) {
            const GridCoord a = layout.data_qubits[t.qubits[0]];
            const GridCoord b = layout.data_qubits[t.qubits[1]];
            const bool top_bottom = a.row == b.row && (a.row == 0 || a.row == d - 1);
            const bool left_right = a.col == b.col && (a.col == 0 || a.col == d - 1);
            if (t.kind == TileKind::A && !top_bottom) {
                fail(name + ": A-type boundary tile off the top/bottom edge");
            }
            if (t.kind == TileKind::B && !left_right) {
                fail(name + ": B-type boundary tile off the left/right edge");
            }
        }
    }
    for (std::size_t x = 0; x < layout.tiles.size(); x++) {
        for (std::size_t y = x + 1; y < layout.tiles.size(); y++) {
            const auto &a = layout.tiles[x];
            const auto &b = layout.tiles[y];
            const std::size_t shared = overlap(a.qubits, b.qubits);
            if (a.kind != b.kind && shared != 0 && shared != 2) {
                fail("tiles " + std::to_string(a.tile_id) + " and " + std::to_string(b.tile_id) + " share " +
                     std::to_string(shared) + " qubits");
            }
            if (a.kind == b.kind && shared > 1) {
                fail("same-type tiles " + std::to_string(a.tile_id) + " and " + std::to_string(b.tile_id) +
                     " share " + std::to_string(shared) + " qubits");
            }
        }
    }
    for (std::size_t q = 0; q < n; q++) {
        std::size_t na = 0, nb = 0;
        for (const auto &t : layout.tiles) {
            if (std::count(t.qubits.begin(), t.qubits.end(), q)) {
                (t.kind == TileKind::A ? na : nb)++;
            }
        }
        if (na < 1 || na > 2 || nb < 1 || nb > 2) {
            fail("qubit " + std::to_string(q) + " has incidence A=" + std::to_string(na) + " B=" + std::to_string(nb));
        }
    }
    if (!rep.ok()) {
        return rep;
    }

    // Numerical commutation in a generic non-Pauli basis.
    const OperatorBasis basis = build_basis({0.7, 1.1, 0.3});
    const auto commutes = [&](const OperatorString &a, const OperatorString &b) {
        const double r = n <= 4 ? commutator_residual(a, b, n) : sampled_residual(a, b, n, 1);
        return r < 1e-10;
    };
    std::vector<OperatorString> ops;
    for (const auto &t : layout.tiles) {
        ops.push_back(tile_operator(t, basis));
    }
    for (std::size_t x = 0; x < ops.size(); x++) {
        for (std::size_t y = x + 1; y < ops.size(); y++) {
            if (!commutes(ops[x], ops[y])) {
                fail("tiles " + std::to_string(layout.tiles[x].tile_id) + " and " +
                     std::to_string(layout.tiles[y].tile_id) + " anticommute");
            }
        }
    }
    const LogicalChains chains = logical_chains(layout);
    const OperatorString xl = logical_operator(chains.x_chain, basis);
    const OperatorString zl = logical_operator(chains.z_chain, basis);
    for (std::size_t x = 0; x < ops.size(); x++) {
        if (!commutes(ops[x], xl) || !commutes(ops[x], zl)) {
            fail("tile " + std::to_string(layout.tiles[x].tile_id) + " does not commute with a logical chain");
        }
    }
    if (sampled_residual(xl, zl, n, -1) > 1e-10) {
        fail("logical chains do not anticommute");
    }
    return rep;
}

SectorBasis logical_basis(const RotatedSurfaceLayout &layout, const OperatorBasis &basis,
                          std::span<const int> tile_outcomes) {
    const std::size_t n = layout.num_data();
    if (tile_outcomes.size() != layout.tiles.size()) {
        throw std::invalid_argument("need one outcome per tile");
    }
    const LogicalChains chains = logical_chains(layout);

    // Seed bits x with S^B-tile parities matching the B outcomes and even z-chain parity.
    std::vector<std::pair<std::uint64_t, int>> rows;
    for (std::size_t k = 0; k < layout.tiles.size(); k++) {
        if (layout.tiles[k].kind != TileKind::B) {
            continue;
        }
        std::uint64_t mask = 0;
        for (std::size_t q : layout.tiles[k].qubits) {
            mask |= std::uint64_t{1} << q;
        }
        rows.push_back({mask, tile_outcomes[k] < 0 ? 1 : 0});
    }
    std::uint64_t zmask = 0;
    for (std::size_t q : chains.z_chain.qubits) {
        zmask |= std::uint64_t{1} << q;
    }
    rows.push_back({zmask, 0});
    const auto seed = solve_gf2(rows, n);
    if (!seed) {
        throw std::logic_error("inconsistent B-type syndrome");
    }

    std::vector<Complex> amps(std::size_t{1} << n);
    for (std::size_t i = 0; i < amps.size(); i++) {
        Complex v = 1;
        for (std::size_t q = 0; q < n; q++) {
            v *= basis.u((i >> q) & 1, (*seed >> q) & 1);
        }
        amps[i] = v;
    }
    StateVector zero = StateVector::from_amplitudes(std::move(amps));
    for (std::size_t k = 0; k < layout.tiles.size(); k++) {
        if (layout.tiles[k].kind == TileKind::A) {
            zero.project_onto(tile_operator(layout.tiles[k], basis), tile_outcomes[k]);
        }
    }
    StateVector one = zero;
    one.apply_string(logical_operator(chains.x_chain, basis));
    return {std::move(zero), std::move(one)};
}

SectorBasis logical_basis(const RotatedSurfaceLayout &layout, const OperatorBasis &basis) {
    const std::vector<int> all_plus(layout.tiles.size(), +1);
    return logical_basis(layout, basis, all_plus);
}

std::array<Complex, 2> logical_amplitudes(const SectorBasis &sector, const StateVector &psi) {
    return {sector.zero.inner_embedded(psi), sector.one.inner_embedded(psi)};
}

StateVector code_state(const RotatedSurfaceLayout &layout, const OperatorBasis &basis, Complex alpha, Complex beta) {
    const SectorBasis sb = logical_basis(layout, basis);
    std::vector<Complex> amps(sb.zero.dimension());
    for (std::size_t i = 0; i < amps.size(); i++) {
        amps[i] = alpha * sb.zero.amplitude(i) + beta * sb.one.amplitude(i);
    }
    return StateVector::from_amplitudes(std::move(amps));
}

}  // namespace nps
