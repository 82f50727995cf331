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

#ifndef NPS_INIT_PROTOCOLS_H
#define NPS_INIT_PROTOCOLS_H

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "nps/code_lattice.h"
#include "nps/measurement_circuits.h"
#include "nps/noise_model.h"
#include "nps/nonpauli_algebra.h"
#include "nps/statevector.h"

namespace nps {

enum class Scheme { NonPauli, Pauli };

const char *scheme_name(Scheme scheme);

struct ProtocolConfig {
    int protocol = 1;
    Scheme scheme = Scheme::NonPauli;
    std::size_t distance = 3;
    /// Logical target alpha|0_L> + beta|1_L>; defaults to |A_L>.
    Complex target_alpha = 1 / std::sqrt(2.0);
    Complex target_beta = std::polar(1 / std::sqrt(2.0), std::numbers::pi / 4);
    /// Overrides the rotation solved from the target.
    std::optional<Su2Params> params;
    /// p_s and split; the mode is taken from the scheme.
    NoiseChannel noise;
    double tolerance = 1e-6;
    int restart_limit = 1000;

    void validate() const;
};

enum class TrialStatus { AcceptedCorrect, AcceptedFailed, DiscardedRestart, Exhausted };

const char *trial_status_name(TrialStatus status);

struct TrialResult {
    TrialStatus status = TrialStatus::DiscardedRestart;
    /// First-round outcomes in canonical order, as a bitmask (bit k set for -1).
    std::uint64_t trajectory = 0;
    /// Pair post-selection failures before the final attempt.
    int restarts = 0;
    double fidelity_to_reference = 0;
    /// Every readout of the trial, in order.
    std::vector<MeasurementRecord> log;
    /// Noisy single-qubit gates on data qubits over all attempts.
    std::size_t prep_gates = 0;
    /// The subset applied to chain qubits before pair measurement.
    std::size_t chain_gates = 0;
    std::size_t error_firings = 0;

    bool accepted() const {
        return status == TrialStatus::AcceptedCorrect || status == TrialStatus::AcceptedFailed;
    }
};

struct TrajectoryEntry {
    std::uint64_t key = 0;
    StateVector reference;
    std::array<Complex, 2> logical{};
    double probability = 0;
};

struct ClusteringReport {
    std::size_t trajectories = 0;
    std::size_t distinct_logical_states = 0;
    /// Fraction of trajectories (by count) in the largest group of equal logical states.
    double majority_fraction = 0;
    /// Same, weighted by trajectory probability.
    double majority_probability = 0;
    std::array<Complex, 2> majority_state{};
};

/// Noiseless references conditioned on first-round tile outcomes.
///
/// Exhaustive tables are built by depth-first projection over every tile in canonical order.
/// Lazy tables compute entries on first lookup; lookups are thread-safe.
class TrajectoryTable {
   public:
    TrajectoryTable(StateVector initial, RotatedSurfaceLayout layout, OperatorBasis basis);

    /// Enumerates all reachable trajectories. Refuses d = 4 unless `allow_large` is set.
    void build_exhaustive(bool allow_large = false);
    bool exhaustive() const {
        return exhaustive_;
    }

    /// Entry for a trajectory, or nullptr if that trajectory is unreachable without errors.
    std::shared_ptr<const TrajectoryEntry> lookup(std::uint64_t key) const;

    /// Entries built so far, ordered by key.
    std::vector<std::shared_ptr<const TrajectoryEntry>> entries() const;
    double total_probability() const;
    ClusteringReport clustering() const;

    const RotatedSurfaceLayout &layout() const {
        return layout_;
    }

   private:
    std::shared_ptr<const TrajectoryEntry> compute(std::uint64_t key) const;
    std::array<Complex, 2> logical_of(std::uint64_t key, const StateVector &state) const;

    StateVector initial_;
    RotatedSurfaceLayout layout_;
    OperatorBasis basis_;
    std::vector<std::size_t> order_;
    bool exhaustive_ = false;
    mutable std::mutex mu_;
    mutable std::map<std::uint64_t, std::shared_ptr<const TrajectoryEntry>> cache_;
};

/// accepted-correct iff fidelity >= 1 - tolerance.
TrialStatus classify(const StateVector &final_state, const StateVector &reference, double tolerance);

/// Bundles a validated config with everything reusable across its trials.
class InitProtocol {
   public:
    explicit InitProtocol(ProtocolConfig config);

    TrialResult run_trial(TrialContext &ctx) const;
    TrialResult run_trial(std::uint64_t master_seed, std::uint64_t stream_index) const;
    /// Context with this protocol's channel and noise basis.
    TrialContext make_context(std::uint64_t master_seed, std::uint64_t stream_index) const;

    const ProtocolConfig &config() const {
        return config_;
    }
    const RotatedSurfaceLayout &layout() const {
        return layout_;
    }
    /// Basis of the stabilizers being measured.
    const OperatorBasis &basis() const {
        return basis_;
    }
    const Su2Params &params() const {
        return params_;
    }
    /// Single-qubit coefficients (c, s e^{i phi'}) of the chain or product state.
    const std::array<Complex, 2> &coefficients() const {
        return coeffs_;
    }
    const StateVector &ideal_pre_tile_state() const {
        return ideal_;
    }
    const TrajectoryTable &table() const {
        return *table_;
    }
    /// Tiles with a fixed first-round outcome, as (canonical position, expected outcome).
    const std::vector<std::pair<std::size_t, int>> &deterministic() const {
        return deterministic_;
    }
    std::size_t num_qubits() const {
        return layout_.num_data() + 1;
    }
    const std::vector<std::size_t> &chain() const {
        return chain_;
    }

   private:
    TrialResult run_protocol1(TrialContext &ctx) const;
    TrialResult run_protocol2(TrialContext &ctx) const;
    /// Measures all tiles twice and classifies; shared tail of both protocols.
    TrialResult finish(StateVector &state, TrialContext &ctx, TrialResult result) const;

    ProtocolConfig config_;
    RotatedSurfaceLayout layout_;
    OperatorBasis basis_;
    Su2Params params_;
    std::array<Complex, 2> coeffs_{};
    Gate2x2 prep_gate_;
    NoiseChannel channel_;
    std::vector<std::size_t> chain_;
    std::vector<std::size_t> order_;
    StateVector ideal_;
    std::unique_ptr<TrajectoryTable> table_;
    std::vector<std::pair<std::size_t, int>> deterministic_;
};

TrialResult run_protocol1(const ProtocolConfig &config, std::uint64_t master_seed, std::uint64_t stream_index);
TrialResult run_protocol2(const ProtocolConfig &config, std::uint64_t master_seed, std::uint64_t stream_index);

/// Exhaustive protocol-2 table for the config (d <= 3 unless allow_large).
std::unique_ptr<TrajectoryTable> build_trajectory_table(const ProtocolConfig &config, bool allow_large = false);

}  // namespace nps

#endif
