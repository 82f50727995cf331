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

#include "nps/noise_model.h"

#include <cmath>
#include <stdexcept>

namespace nps {

const char *error_branch_name(ErrorBranch branch) {
    switch (branch) {
        case ErrorBranch::None:
            return "none";
        case ErrorBranch::A:
            return "A";
        case ErrorBranch::B:
            return "B";
        case ErrorBranch::C:
            return "C";
    }
    return "?";
}

NoiseChannel NoiseChannel::noiseless(NoiseMode mode) {
    NoiseChannel c;
    c.mode = mode;
    return c;
}

NoiseChannel NoiseChannel::symmetric(NoiseMode mode, double p_s) {
    return weighted(mode, p_s, 1, 1, 1);
}

NoiseChannel NoiseChannel::weighted(NoiseMode mode, double p_s, double w_a, double w_b, double w_c) {
    if (!(w_a >= 0 && w_b >= 0 && w_c >= 0) || w_a + w_b + w_c <= 0) {
        throw std::invalid_argument("error split weights must be nonnegative with a positive sum");
    }
    const double total = w_a + w_b + w_c;
    NoiseChannel c;
    c.mode = mode;
    c.p_s = p_s;
    c.p_a = p_s * w_a / total;
    c.p_b = p_s * w_b / total;
    c.p_c = p_s - c.p_a - c.p_b;
    if (c.p_c < 0) {
        c.p_c = 0;
    }
    c.validate();
    return c;
}

void NoiseChannel::validate() const {
    const auto prob = [](double p, const char *name) {
        if (!(p >= 0 && p <= 1)) {
            throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
        }
    };
    prob(p_s, "p_s");
    prob(p_a, "p_a");
    prob(p_b, "p_b");
    prob(p_c, "p_c");
    prob(p_t, "p_t");
    prob(p_r, "p_r");
    if (std::abs(p_a + p_b + p_c - p_s) > 1e-12) {
        throw std::invalid_argument("error components must sum to p_s");
    }
}

Gate2x2 error_gate(ErrorBranch branch, NoiseMode mode, const OperatorBasis &basis) {
    switch (branch) {
        case ErrorBranch::None:
            return Gate2x2::identity();
        case ErrorBranch::A:
            return mode == NoiseMode::Pauli ? gates::X() : basis.s_a;
        case ErrorBranch::B:
            return mode == NoiseMode::Pauli ? gates::Z() : basis.s_b;
        case ErrorBranch::C:
            return mode == NoiseMode::Pauli ? gates::Y() : basis.s_c;
    }
    throw std::logic_error("bad error branch");
}

ErrorBranch sample_error(double p_total, double p_a, double p_b, RngStream &rng) {
    if (p_total <= 0) {
        return ErrorBranch::None;
    }
    const double r = rng.uniform();
    if (r < p_a) {
        return ErrorBranch::A;
    }
    if (r < p_a + p_b) {
        return ErrorBranch::B;
    }
    if (r < p_total) {
        return ErrorBranch::C;
    }
    return ErrorBranch::None;
}

ErrorBranch apply_after_gate(StateVector &state, std::size_t q, const NoiseChannel &channel,
                             const OperatorBasis &basis, RngStream &rng) {
    const ErrorBranch b = sample_error(channel.p_s, channel.p_a, channel.p_b, rng);
    if (b != ErrorBranch::None) {
        state.apply(error_gate(b, channel.mode, basis), q);
    }
    return b;
}

TrialContext::TrialContext(std::uint64_t master_seed, std::uint64_t stream_index, NoiseChannel channel,
                           OperatorBasis noise_basis)
    : rng_(master_seed, stream_index), channel_(channel), noise_basis_(noise_basis) {
    channel_.validate();
}

ErrorBranch TrialContext::after_gate(StateVector &state, std::size_t q, SiteKind kind) {
    const std::size_t index = site_counts_[static_cast<std::size_t>(kind)]++;
    ErrorBranch b = ErrorBranch::None;
    switch (kind) {
        case SiteKind::PrepGate:
        case SiteKind::AncillaGate:
            b = sample_error(channel_.p_s, channel_.p_a, channel_.p_b, rng_);
            break;
        case SiteKind::ControlledGate:
            b = sample_error(channel_.p_t, channel_.p_t / 3, channel_.p_t / 3, rng_);
            break;
        case SiteKind::Reset:
            b = sample_error(channel_.p_r, channel_.p_r / 3, channel_.p_r / 3, rng_);
            break;
    }
    if (b != ErrorBranch::None) {
        state.apply(error_gate(b, channel_.mode, noise_basis_), q);
        firings_++;
    }
    for (const auto &f : faults_) {
        if (f.kind == kind && f.index == index && f.branch != ErrorBranch::None) {
            state.apply(error_gate(f.branch, channel_.mode, noise_basis_), q);
            firings_++;
            b = f.branch;
        }
    }
    return b;
}

int TrialContext::readout(StateVector &state, std::size_t ancilla, ReadoutKind kind) {
    if (!script_) {
        return state.measure(ancilla, rng_);
    }
    const double p1 = state.probability_one(ancilla);
    const double p0 = 1 - p1;
    const bool zero_ok = p0 >= StateVector::kZeroProbability;
    const bool one_ok = p1 >= StateVector::kZeroProbability;
    int bit;
    if (script_pos_ < script_->size()) {
        bit = (*script_)[script_pos_++];
        if ((bit == 0 && !zero_ok) || (bit == 1 && !one_ok)) {
            throw std::logic_error("scripted readout selects a zero-probability branch");
        }
    } else {
        bit = zero_ok ? 0 : 1;
    }
    decisions_.push_back({kind, bit, zero_ok && one_ok, bit ? p1 : p0});
    state.project(ancilla, bit);
    return bit;
}

void TrialContext::add_fault(ForcedFault fault) {
    faults_.push_back(fault);
}

void TrialContext::set_script(std::vector<int> bits) {
    script_ = std::move(bits);
    script_pos_ = 0;
    decisions_.clear();
}

}  // namespace nps
