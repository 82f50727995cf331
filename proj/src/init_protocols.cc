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

#include "nps/init_protocols.h"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace nps {

const char *scheme_name(Scheme scheme) {
    return scheme == Scheme::NonPauli ? "non-pauli" : "pauli";
}

const char *trial_status_name(TrialStatus status) {
    switch (status) {
        case TrialStatus::AcceptedCorrect:
            return "accepted-correct";
        case TrialStatus::AcceptedFailed:
            return "accepted-failed";
        case TrialStatus::DiscardedRestart:
            return "discarded-restart";
        case TrialStatus::Exhausted:
            return "exhausted";
    }
    return "?";
}

void ProtocolConfig::validate() const {
    if (protocol != 1 && protocol != 2) {
        throw std::invalid_argument("protocol must be 1 or 2");
    }
    if (distance < 2 || distance > 4) {
        throw std::invalid_argument("distance must be 2, 3 or 4");
    }
    if (!(tolerance > 0 && tolerance < 1)) {
        throw std::invalid_argument("tolerance must lie in (0, 1)");
    }
    if (restart_limit < 0) {
        throw std::invalid_argument("restart_limit must be nonnegative");
    }
    if (std::abs(std::norm(target_alpha) + std::norm(target_beta) - 1) > 1e-9) {
        throw std::invalid_argument("target amplitudes must be normalized");
    }
    noise.validate();
}

TrialStatus classify(const StateVector &final_state, const StateVector &reference, double tolerance) {
    return fidelity(final_state, reference) >= 1 - tolerance ? TrialStatus::AcceptedCorrect
                                                             : TrialStatus::AcceptedFailed;
}

// ---------------------------------------------------------------------------------------------

TrajectoryTable::TrajectoryTable(StateVector initial, RotatedSurfaceLayout layout, OperatorBasis basis)
    : initial_(std::move(initial)), layout_(std::move(layout)), basis_(basis), order_(layout_.canonical_order()) {
}

std::array<Complex, 2> TrajectoryTable::logical_of(std::uint64_t key, const StateVector &state) const {
    std::vector<int> outcomes(layout_.tiles.size());
    for (std::size_t k = 0; k < order_.size(); k++) {
        outcomes[order_[k]] = ((key >> k) & 1) ? -1 : +1;
    }
    return logical_amplitudes(logical_basis(layout_, basis_, outcomes), state);
}

std::shared_ptr<const TrajectoryEntry> TrajectoryTable::compute(std::uint64_t key) const {
    StateVector state = initial_;
    double prob = 1;
    for (std::size_t k = 0; k < order_.size(); k++) {
        const int sign = ((key >> k) & 1) ? -1 : +1;
        double p;
        try {
            p = state.project_onto(tile_operator(layout_.tiles[order_[k]], basis_), sign);
        } catch (const std::logic_error &) {
            return nullptr;
        }
        if (p < StateVector::kZeroProbability) {
            return nullptr;
        }
        prob *= p;
    }
    const auto logical = logical_of(key, state);
    return std::make_shared<const TrajectoryEntry>(TrajectoryEntry{key, std::move(state), logical, prob});
}

void TrajectoryTable::build_exhaustive(bool allow_large) {
    if (layout_.distance >= 4 && !allow_large) {
        throw std::invalid_argument("exhaustive trajectory enumeration at d >= 4 needs an explicit opt-in");
    }
    std::map<std::uint64_t, std::shared_ptr<const TrajectoryEntry>> found;
    std::vector<OperatorString> ops;
    for (std::size_t pos : order_) {
        ops.push_back(tile_operator(layout_.tiles[pos], basis_));
    }
    std::function<void(std::size_t, const StateVector &, std::uint64_t, double)> dfs =
        [&](std::size_t k, const StateVector &state, std::uint64_t key, double prob) {
            if (k == order_.size()) {
                found[key] = std::make_shared<const TrajectoryEntry>(
                    TrajectoryEntry{key, state, logical_of(key, state), prob});
                return;
            }
            for (int bit = 0; bit < 2; bit++) {
                StateVector next = state;
                double p;
                try {
                    p = next.project_onto(ops[k], bit ? -1 : +1);
                } catch (const std::logic_error &) {
                    continue;
                }
                if (p < StateVector::kZeroProbability) {
                    continue;
                }
                dfs(k + 1, next, key | (std::uint64_t(bit) << k), prob * p);
            }
        };
    dfs(0, initial_, 0, 1.0);
    std::lock_guard<std::mutex> lock(mu_);
    cache_ = std::move(found);
    exhaustive_ = true;
}

std::shared_ptr<const TrajectoryEntry> TrajectoryTable::lookup(std::uint64_t key) const {
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = cache_.find(key);
        if (it != cache_.end()) {
            return it->second;
        }
        if (exhaustive_) {
            return nullptr;
        }
    }
    auto entry = compute(key);
    std::lock_guard<std::mutex> lock(mu_);
    auto [it, inserted] = cache_.emplace(key, entry);
    return it->second;
}

std::vector<std::shared_ptr<const TrajectoryEntry>> TrajectoryTable::entries() const {
    std::lock_guard<std::mutex> lock(mu_);
    std::vector<std::shared_ptr<const TrajectoryEntry>> out;
    for (const auto &[key, e] : cache_) {
        if (e) {
            out.push_back(e);
        }
    }
    return out;
}

double TrajectoryTable::total_probability() const {
    double total = 0;
    for (const auto &e : entries()) {
        total += e->probability;
    }
    return total;
}

ClusteringReport TrajectoryTable::clustering() const {
    const auto all = entries();
    ClusteringReport rep;
    rep.trajectories = all.size();
    struct Group {
        std::array<Complex, 2> state;
        std::size_t count;
        double prob;
    };
    std::vector<Group> groups;
    for (const auto &e : all) {
        bool placed = false;
        for (auto &g : groups) {
            if (fidelity(g.state, e->logical) >= 1 - 1e-9) {
                g.count++;
                g.prob += e->probability;
                placed = true;
                break;
            }
        }
        if (!placed) {
            groups.push_back({e->logical, 1, e->probability});
        }
    }
    rep.distinct_logical_states = groups.size();
    if (!groups.empty()) {
        const auto best = std::max_element(groups.begin(), groups.end(),
                                           [](const Group &a, const Group &b) { return a.count < b.count; });
        rep.majority_fraction = static_cast<double>(best->count) / static_cast<double>(all.size());
        rep.majority_probability = best->prob;
        const double n = std::sqrt(std::norm(best->state[0]) + std::norm(best->state[1]));
        rep.majority_state = {best->state[0] / n, best->state[1] / n};
    }
    return rep;
}

// ---------------------------------------------------------------------------------------------

InitProtocol::InitProtocol(ProtocolConfig config)
    : config_(std::move(config)), layout_(build_layout(config_.distance)), ideal_(StateVector::ground(1)) {
    config_.validate();
    const std::size_t d = config_.distance;
    const std::size_t n = layout_.num_data();
    chain_ = logical_chains(layout_).x_chain.qubits;

    if (config_.params) {
        params_ = config_.params->canonical();
    } else {
        params_ = solve_params_for_target(config_.target_alpha, config_.target_beta, config_.protocol == 1 ? d : 1)
                      .params;
    }
    const OperatorBasis rotated = build_basis(params_);
    coeffs_ = {rotated.ground_coeff_plus, rotated.ground_coeff_minus};

    channel_ = config_.noise;
    if (config_.scheme == Scheme::NonPauli) {
        basis_ = rotated;
        prep_gate_ = rotated.u;  // |0> -> |+>_B
        channel_.mode = NoiseMode::NonPauli;
    } else {
        basis_ = pauli_basis();
        prep_gate_ = rotated.u.adjoint();  // |0> -> c|0> + s e^{i phi'}|1>
        channel_.mode = NoiseMode::Pauli;
    }

    StateVector ideal = StateVector::ground(n + 1);
    const auto on_chain = [&](std::size_t q) { return std::count(chain_.begin(), chain_.end(), q) > 0; };
    if (config_.protocol == 1) {
        if (config_.scheme == Scheme::Pauli) {
            for (std::size_t q : chain_) {
                ideal.apply(prep_gate_, q);
            }
        }
        for (std::size_t i = 0; i + 1 < chain_.size(); i++) {
            ideal.project_onto(OperatorString{{chain_[i], basis_.s_b}, {chain_[i + 1], basis_.s_b}}, +1);
        }
        if (config_.scheme == Scheme::NonPauli) {
            for (std::size_t q = 0; q < n; q++) {
                if (!on_chain(q)) {
                    ideal.apply(prep_gate_, q);
                }
            }
        }
    } else if (config_.scheme == Scheme::Pauli) {
        for (std::size_t q = 0; q < n; q++) {
            ideal.apply(prep_gate_, q);
        }
    }
    ideal_ = ideal;

    order_ = layout_.canonical_order();
    for (std::size_t k = 0; k < order_.size(); k++) {
        const double e = ideal_.expectation(tile_operator(layout_.tiles[order_[k]], basis_)).real();
        if (std::abs(e) >= 1 - 1e-9) {
            deterministic_.push_back({k, e > 0 ? +1 : -1});
        }
    }

    table_ = std::make_unique<TrajectoryTable>(ideal_, layout_, basis_);
    if (config_.protocol == 2 && d <= 3) {
        table_->build_exhaustive();
    }
}

TrialContext InitProtocol::make_context(std::uint64_t master_seed, std::uint64_t stream_index) const {
    return TrialContext(master_seed, stream_index, channel_, basis_);
}

TrialResult InitProtocol::run_trial(std::uint64_t master_seed, std::uint64_t stream_index) const {
    TrialContext ctx = make_context(master_seed, stream_index);
    return run_trial(ctx);
}

TrialResult InitProtocol::run_trial(TrialContext &ctx) const {
    TrialResult r = config_.protocol == 1 ? run_protocol1(ctx) : run_protocol2(ctx);
    r.error_firings = ctx.error_firings();
    return r;
}

TrialResult InitProtocol::run_protocol1(TrialContext &ctx) const {
    const std::size_t n = layout_.num_data();
    const std::size_t anc = layout_.ancilla_index;
    TrialResult result;
    StateVector state = StateVector::ground(n + 1);
    while (true) {
        state = StateVector::ground(n + 1);
        if (config_.scheme == Scheme::Pauli) {
            for (std::size_t q : chain_) {
                state.apply(prep_gate_, q);
                ctx.after_gate(state, q, SiteKind::PrepGate);
                result.prep_gates++;
                result.chain_gates++;
            }
        }
        bool passed = true;
        for (std::size_t i = 0; i + 1 < chain_.size(); i++) {
            const int out = measure_temporary_pair(state, chain_[i], chain_[i + 1], basis_, anc, ctx);
            result.log.push_back({-1, chain_[i], chain_[i + 1], out, 0, false});
            if (out < 0) {
                passed = false;
                break;
            }
        }
        if (passed) {
            break;
        }
        if (++result.restarts > config_.restart_limit) {
            result.status = TrialStatus::Exhausted;
            return result;
        }
    }
    if (config_.scheme == Scheme::NonPauli) {
        for (std::size_t q = 0; q < n; q++) {
            if (std::count(chain_.begin(), chain_.end(), q) == 0) {
                state.apply(prep_gate_, q);
                ctx.after_gate(state, q, SiteKind::PrepGate);
                result.prep_gates++;
            }
        }
    }
    return finish(state, ctx, std::move(result));
}

TrialResult InitProtocol::run_protocol2(TrialContext &ctx) const {
    const std::size_t n = layout_.num_data();
    TrialResult result;
    StateVector state = StateVector::ground(n + 1);
    if (config_.scheme == Scheme::Pauli) {
        for (std::size_t q = 0; q < n; q++) {
            state.apply(prep_gate_, q);
            ctx.after_gate(state, q, SiteKind::PrepGate);
            result.prep_gates++;
        }
    }
    return finish(state, ctx, std::move(result));
}

TrialResult InitProtocol::finish(StateVector &state, TrialContext &ctx, TrialResult result) const {
    const std::size_t anc = layout_.ancilla_index;
    std::vector<int> expected(order_.size(), 0);
    for (const auto &[k, e] : deterministic_) {
        expected[k] = e;
    }
    std::uint64_t key = 0;
    for (std::size_t k = 0; k < order_.size(); k++) {
        const StabilizerTile &tile = layout_.tiles[order_[k]];
        const DoubleMeasurement m = double_measure_with_discard(state, tile, basis_, anc, ctx);
        result.log.push_back({tile.tile_id, 0, 0, m.first, 0, false});
        result.log.push_back({tile.tile_id, 0, 0, m.second, 1, m.discarded});
        if (m.discarded || (expected[k] != 0 && m.first != expected[k])) {
            result.status = TrialStatus::DiscardedRestart;
            result.trajectory = key;
            return result;
        }
        if (m.first < 0) {
            key |= std::uint64_t{1} << k;
        }
    }
    result.trajectory = key;
    const auto entry = table_->lookup(key);
    if (!entry) {
        result.status = TrialStatus::AcceptedFailed;
        result.fidelity_to_reference = 0;
        return result;
    }
    result.fidelity_to_reference = fidelity(state, entry->reference);
    result.status = classify(state, entry->reference, config_.tolerance);
    return result;
}

TrialResult run_protocol1(const ProtocolConfig &config, std::uint64_t master_seed, std::uint64_t stream_index) {
    if (config.protocol != 1) {
        throw std::invalid_argument("run_protocol1 needs protocol = 1");
    }
    return InitProtocol(config).run_trial(master_seed, stream_index);
}

TrialResult run_protocol2(const ProtocolConfig &config, std::uint64_t master_seed, std::uint64_t stream_index) {
    if (config.protocol != 2) {
        throw std::invalid_argument("run_protocol2 needs protocol = 2");
    }
    return InitProtocol(config).run_trial(master_seed, stream_index);
}

std::unique_ptr<TrajectoryTable> build_trajectory_table(const ProtocolConfig &config, bool allow_large) {
    if (config.protocol != 2) {
        throw std::invalid_argument("trajectory tables are built for protocol 2");
    }
    ProtocolConfig small = config;
    small.protocol = 2;
    InitProtocol proto(small);
    auto table = std::make_unique<TrajectoryTable>(proto.ideal_pre_tile_state(), proto.layout(), proto.basis());
    table->build_exhaustive(allow_large);
    return table;
}

}  // namespace nps
