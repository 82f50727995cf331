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

#ifndef NPS_NOISE_MODEL_H
#define NPS_NOISE_MODEL_H

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nps/nonpauli_algebra.h"
#include "nps/statevector.h"

namespace nps {

enum class NoiseMode { Pauli, NonPauli };

/// Which single-qubit error fired. In Pauli mode A, B, C stand for X, Z, Y.
enum class ErrorBranch { None, A, B, C };

const char *error_branch_name(ErrorBranch branch);

struct NoiseChannel {
    NoiseMode mode = NoiseMode::NonPauli;
    double p_s = 0;
    double p_a = 0;
    double p_b = 0;
    double p_c = 0;
    double p_t = 0;
    double p_r = 0;

    static NoiseChannel noiseless(NoiseMode mode = NoiseMode::NonPauli);
    /// p_a = p_b = p_c = p_s / 3.
    static NoiseChannel symmetric(NoiseMode mode, double p_s);
    /// Splits p_s in proportion to the given nonnegative weights.
    static NoiseChannel weighted(NoiseMode mode, double p_s, double w_a, double w_b, double w_c);

    /// Throws std::invalid_argument when probabilities are out of range or do not sum to p_s.
    void validate() const;
    bool is_noiseless() const {
        return p_s == 0 && p_t == 0 && p_r == 0;
    }
};

/// The gate an error branch applies: S^A, S^B, S^C of `basis` in non-Pauli mode, X, Z, Y in Pauli mode.
Gate2x2 error_gate(ErrorBranch branch, NoiseMode mode, const OperatorBasis &basis);

/// One categorical draw. No random number is consumed when `p_total` is zero.
ErrorBranch sample_error(double p_total, double p_a, double p_b, RngStream &rng);

/// Circuit locations where the channel may act.
enum class SiteKind {
    PrepGate,     // state-preparation or driving gate on a data qubit
    AncillaGate,  // Hadamard on the measurement ancilla
    ControlledGate,
    Reset,
};

/// A deterministic error placed at the `index`-th site of a given kind within one trial.
struct ForcedFault {
    SiteKind kind = SiteKind::PrepGate;
    std::size_t index = 0;
    ErrorBranch branch = ErrorBranch::A;
};

/// Kind of ancilla readout, used to restrict branch enumeration.
enum class ReadoutKind { Pair, Tile, Seam, Split, Logical };

struct ReadoutDecision {
    ReadoutKind kind;
    int bit;
    /// True when the other bit also had nonzero probability.
    bool alternative_possible;
    double probability;
};

/// Everything a single trial owns besides its statevector: the random stream, the noise channel
/// with the basis it acts in, optional forced faults, optional scripted readouts, and counters.
class TrialContext {
   public:
    TrialContext(std::uint64_t master_seed, std::uint64_t stream_index, NoiseChannel channel,
                 OperatorBasis noise_basis);

    RngStream &rng() {
        return rng_;
    }
    const NoiseChannel &channel() const {
        return channel_;
    }
    const OperatorBasis &noise_basis() const {
        return noise_basis_;
    }

    /// Applies the channel to qubit q after a gate at a site of the given kind.
    ErrorBranch after_gate(StateVector &state, std::size_t q, SiteKind kind);

    /// Measures the ancilla. Uses the script if one is set, otherwise the Born rule.
    int readout(StateVector &state, std::size_t ancilla, ReadoutKind kind);

    void add_fault(ForcedFault fault);
    /// Readout bits consumed in order; once exhausted, each readout takes bit 0 when possible.
    void set_script(std::vector<int> bits);
    bool scripted() const {
        return script_.has_value();
    }
    const std::vector<ReadoutDecision> &decisions() const {
        return decisions_;
    }

    std::size_t sites(SiteKind kind) const {
        return site_counts_[static_cast<std::size_t>(kind)];
    }
    std::size_t error_firings() const {
        return firings_;
    }

   private:
    RngStream rng_;
    NoiseChannel channel_;
    OperatorBasis noise_basis_;
    std::vector<ForcedFault> faults_;
    std::optional<std::vector<int>> script_;
    std::size_t script_pos_ = 0;
    std::vector<ReadoutDecision> decisions_;
    std::size_t site_counts_[4] = {0, 0, 0, 0};
    std::size_t firings_ = 0;
};

/// Standalone form: draws from the channel and applies the chosen error to qubit q.
ErrorBranch apply_after_gate(StateVector &state, std::size_t q, const NoiseChannel &channel,
                             const OperatorBasis &basis, RngStream &rng);

/// Next script for depth-first enumeration of readout branches, given the decisions of the run
/// that used `script`. Only readouts whose kind passes `branchable` are flipped. Returns nullopt
/// when the enumeration is complete.
template <typename Pred>
std::optional<std::vector<int>> next_branch_script(const std::vector<ReadoutDecision> &decisions, Pred branchable) {
    for (std::size_t k = decisions.size(); k-- > 0;) {
        const auto &dec = decisions[k];
        if (dec.bit == 0 && dec.alternative_possible && branchable(dec.kind)) {
            std::vector<int> script;
            for (std::size_t j = 0; j < k; j++) {
                script.push_back(decisions[j].bit);
            }
            script.push_back(1);
            return script;
        }
    }
    return std::nullopt;
}

}  // namespace nps

#endif
