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

#ifndef NPS_HARNESS_H
#define NPS_HARNESS_H

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nps/init_protocols.h"

namespace nps {

/// Bad configuration file contents or overrides.
class ConfigError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

struct SweepConfig {
    std::vector<int> protocols{1};
    std::vector<Scheme> schemes{Scheme::NonPauli};
    std::vector<std::size_t> distances{3};
    std::vector<double> p_s_values{0};
    /// Relative weights of the A, B, C branches.
    double split_a = 1, split_b = 1, split_c = 1;
    double p_t = 0;
    double p_r = 0;
    Complex target_alpha = 1 / std::sqrt(2.0);
    Complex target_beta = std::polar(1 / std::sqrt(2.0), std::numbers::pi / 4);
    std::optional<Su2Params> params;
    double tolerance = 1e-6;
    int restart_limit = 1000;
    /// Zero selects the per-distance default (d=2: 200000, d=3: 50000, d=4: 10000).
    std::size_t shots = 0;
    std::uint64_t master_seed = 1;
    std::size_t workers = 1;
    std::string output_path;

    void validate() const;
};

/// Parses `key = value` lines; `#` starts a comment. Unknown or repeated keys throw ConfigError.
SweepConfig parse_sweep_config(std::istream &in);
SweepConfig load_sweep_config(const std::string &path);

std::size_t default_shots(std::size_t distance);

struct SweepPoint {
    std::size_t index = 0;
    ProtocolConfig protocol;
    double p_s = 0;
    std::size_t shots = 0;
};

/// Points in (protocol, scheme, distance, p_s) order; `index` numbers them from zero.
std::vector<SweepPoint> sweep_points(const SweepConfig &config);

struct SweepRecord {
    int protocol = 1;
    Scheme scheme = Scheme::NonPauli;
    std::size_t distance = 0;
    double p_s = 0;
    std::size_t shots = 0;
    std::size_t accepted = 0;
    std::size_t failures = 0;
    std::size_t discards = 0;
    std::size_t restarts_total = 0;
    std::size_t exhausted = 0;
    double ler_total = 0;
    double ler_accepted = 0;
    /// accepted / (shots + restarts_total): every pair post-selection failure is an attempt.
    double acceptance_rate = 0;
    double wilson95 = 0;
    std::uint64_t seed = 0;
};

/// Per-trial random stream index: point_index * 2^32 + trial_index.
std::uint64_t trial_stream(std::size_t point_index, std::size_t trial_index);

/// Runs `shots` trials of one point on `workers` threads with a fixed contiguous partition.
SweepRecord run_point(const SweepPoint &point, std::uint64_t master_seed, std::size_t workers);

std::vector<SweepRecord> run_sweep(const SweepConfig &config);

struct WilsonInterval {
    double center = 0;
    double half_width = 0;
    double lower() const {
        return center - half_width;
    }
    double upper() const {
        return center + half_width;
    }
};

/// Wilson score interval for k successes in n trials at 95% (z = 1.959963984540054).
WilsonInterval wilson95(std::size_t k, std::size_t n);

/// Maximum-likelihood fit of counts_i ~ Poisson(n_i * A * x_i^slope). Returns NaN when every count is
/// zero or fewer than two points are given.
double fit_power_law_slope(const std::vector<double> &x, const std::vector<std::size_t> &counts,
                           const std::vector<std::size_t> &n);

extern const char *const kCsvHeader;

/// Sorted copy by (protocol, scheme, distance, p_s); non-pauli sorts before pauli.
std::vector<SweepRecord> sorted_records(std::vector<SweepRecord> records);
void write_csv(const std::vector<SweepRecord> &records, std::ostream &out);
/// Throws std::runtime_error naming the path on I/O failure.
void emit_csv(const std::vector<SweepRecord> &records, const std::string &path);

}  // namespace nps

#endif
