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

#include "nps/harness.h"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

namespace nps {

namespace {

std::string trim(const std::string &s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
        return "";
    }
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string &s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(s);
    while (std::getline(is, item, sep)) {
        out.push_back(trim(item));
    }
    return out;
}

double parse_double(const std::string &key, const std::string &text) {
    errno = 0;
    char *end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size() || errno != 0 || !std::isfinite(v)) {
        throw ConfigError("invalid number '" + text + "' for key '" + key + "'");
    }
    return v;
}

std::uint64_t parse_uint(const std::string &key, const std::string &text) {
    if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
        throw ConfigError("invalid integer '" + text + "' for key '" + key + "'");
    }
    errno = 0;
    const unsigned long long v = std::strtoull(text.c_str(), nullptr, 10);
    if (errno != 0) {
        throw ConfigError("integer out of range '" + text + "' for key '" + key + "'");
    }
    return v;
}

Scheme parse_scheme(const std::string &text) {
    if (text == "non-pauli" || text == "nonpauli") {
        return Scheme::NonPauli;
    }
    if (text == "pauli") {
        return Scheme::Pauli;
    }
    throw ConfigError("unknown scheme '" + text + "' (expected non-pauli or pauli)");
}

std::string format_g10(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

}  // namespace

void SweepConfig::validate() const {
    if (protocols.empty() || schemes.empty() || distances.empty() || p_s_values.empty()) {
        throw ConfigError("protocol, scheme, distance and noise.p_s need at least one value");
    }
    for (int p : protocols) {
        if (p != 1 && p != 2) {
            throw ConfigError("protocol must be 1 or 2");
        }
    }
    for (std::size_t d : distances) {
        if (d < 2 || d > 4) {
            throw ConfigError("distance must be 2, 3 or 4");
        }
    }
    for (double p : p_s_values) {
        if (!(p >= 0 && p <= 0.5)) {
            throw ConfigError("noise.p_s values must lie in [0, 0.5]");
        }
    }
    if (!(p_t >= 0 && p_t <= 1) || !(p_r >= 0 && p_r <= 1)) {
        throw ConfigError("noise.p_t and noise.p_r must lie in [0, 1]");
    }
    if (!(split_a >= 0 && split_b >= 0 && split_c >= 0) || split_a + split_b + split_c <= 0) {
        throw ConfigError("noise.split weights must be nonnegative with a positive sum");
    }
    if (!(tolerance > 0 && tolerance < 1)) {
        throw ConfigError("tolerance must lie in (0, 1)");
    }
    if (restart_limit < 0) {
        throw ConfigError("restart_limit must be nonnegative");
    }
    if (workers < 1) {
        throw ConfigError("workers must be >= 1");
    }
    if (std::abs(std::norm(target_alpha) + std::norm(target_beta) - 1) > 1e-9) {
        throw ConfigError("target amplitudes must be normalized");
    }
}

SweepConfig parse_sweep_config(std::istream &in) {
    SweepConfig cfg;
    std::set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        line_no++;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.resize(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value', got '" + line + "'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!seen.insert(key).second) {
            throw ConfigError("line " + std::to_string(line_no) + ": repeated key '" + key + "'");
        }
        if (value.empty()) {
            throw ConfigError("line " + std::to_string(line_no) + ": empty value for key '" + key + "'");
        }

        if (key == "protocol") {
            cfg.protocols.clear();
            for (const auto &v : split_list(value, ',')) {
                cfg.protocols.push_back(static_cast<int>(parse_uint(key, v)));
            }
        } else if (key == "scheme") {
            cfg.schemes.clear();
            for (const auto &v : split_list(value, ',')) {
                cfg.schemes.push_back(parse_scheme(v));
            }
        } else if (key == "distance") {
            cfg.distances.clear();
            for (const auto &v : split_list(value, ',')) {
                cfg.distances.push_back(parse_uint(key, v));
            }
        } else if (key == "noise.p_s") {
            cfg.p_s_values.clear();
            for (const auto &v : split_list(value, ',')) {
                cfg.p_s_values.push_back(parse_double(key, v));
            }
        } else if (key == "noise.split") {
            if (value == "symmetric") {
                cfg.split_a = cfg.split_b = cfg.split_c = 1;
            } else {
                const auto parts = split_list(value, ':');
                if (parts.size() != 3) {
                    throw ConfigError("noise.split must be 'symmetric' or 'a:b:c'");
                }
                cfg.split_a = parse_double(key, parts[0]);
                cfg.split_b = parse_double(key, parts[1]);
                cfg.split_c = parse_double(key, parts[2]);
            }
        } else if (key == "noise.p_t") {
            cfg.p_t = parse_double(key, value);
        } else if (key == "noise.p_r") {
            cfg.p_r = parse_double(key, value);
        } else if (key == "target") {
            if (value == "A") {
                cfg.target_alpha = 1 / std::sqrt(2.0);
                cfg.target_beta = std::polar(1 / std::sqrt(2.0), std::numbers::pi / 4);
            } else if (value.rfind("coeff:", 0) == 0) {
                const auto parts = split_list(value.substr(6), ',');
                if (parts.size() != 4) {
                    throw ConfigError("target coeff needs four numbers: re,im,re,im");
                }
                Complex a(parse_double(key, parts[0]), parse_double(key, parts[1]));
                Complex b(parse_double(key, parts[2]), parse_double(key, parts[3]));
                const double n = std::sqrt(std::norm(a) + std::norm(b));
                if (n == 0) {
                    throw ConfigError("target coefficients are zero");
                }
                cfg.target_alpha = a / n;
                cfg.target_beta = b / n;
            } else {
                throw ConfigError("target must be 'A' or 'coeff:re,im,re,im'");
            }
        } else if (key == "params") {
            const auto parts = split_list(value, ',');
            if (parts.size() != 3) {
                throw ConfigError("params needs gamma,theta,phi");
            }
            cfg.params = Su2Params{parse_double(key, parts[0]), parse_double(key, parts[1]),
                                   parse_double(key, parts[2])};
        } else if (key == "tolerance") {
            cfg.tolerance = parse_double(key, value);
        } else if (key == "restart_limit") {
            cfg.restart_limit = static_cast<int>(parse_uint(key, value));
        } else if (key == "shots") {
            cfg.shots = value == "auto" ? 0 : parse_uint(key, value);
            if (value != "auto" && cfg.shots == 0) {
                throw ConfigError("shots must be >= 1");
            }
        } else if (key == "seed") {
            cfg.master_seed = parse_uint(key, value);
        } else if (key == "workers") {
            cfg.workers = parse_uint(key, value);
        } else if (key == "out") {
            cfg.output_path = value;
        } else {
            throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        }
    }
    cfg.validate();
    return cfg;
}

SweepConfig load_sweep_config(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    return parse_sweep_config(in);
}

std::size_t default_shots(std::size_t distance) {
    switch (distance) {
        case 2:
            return 200000;
        case 3:
            return 50000;
        default:
            return 10000;
    }
}

std::vector<SweepPoint> sweep_points(const SweepConfig &config) {
    config.validate();
    std::vector<int> protocols = config.protocols;
    std::vector<Scheme> schemes = config.schemes;
    std::vector<std::size_t> distances = config.distances;
    std::vector<double> ps = config.p_s_values;
    std::sort(protocols.begin(), protocols.end());
    std::sort(schemes.begin(), schemes.end());
    std::sort(distances.begin(), distances.end());
    std::sort(ps.begin(), ps.end());
    protocols.erase(std::unique(protocols.begin(), protocols.end()), protocols.end());
    schemes.erase(std::unique(schemes.begin(), schemes.end()), schemes.end());
    distances.erase(std::unique(distances.begin(), distances.end()), distances.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());

    std::vector<SweepPoint> out;
    for (int protocol : protocols) {
        for (Scheme scheme : schemes) {
            for (std::size_t d : distances) {
                for (double p : ps) {
                    SweepPoint pt;
                    pt.index = out.size();
                    pt.p_s = p;
                    pt.shots = config.shots ? config.shots : default_shots(d);
                    ProtocolConfig &pc = pt.protocol;
                    pc.protocol = protocol;
                    pc.scheme = scheme;
                    pc.distance = d;
                    pc.target_alpha = config.target_alpha;
                    pc.target_beta = config.target_beta;
                    pc.params = config.params;
                    pc.noise = NoiseChannel::weighted(NoiseMode::NonPauli, p, config.split_a, config.split_b,
                                                      config.split_c);
                    pc.noise.p_t = config.p_t;
                    pc.noise.p_r = config.p_r;
                    pc.tolerance = config.tolerance;
                    pc.restart_limit = config.restart_limit;
                    out.push_back(std::move(pt));
                }
            }
        }
    }
    return out;
}

std::uint64_t trial_stream(std::size_t point_index, std::size_t trial_index) {
    return (static_cast<std::uint64_t>(point_index) << 32) + static_cast<std::uint64_t>(trial_index);
}

WilsonInterval wilson95(std::size_t k, std::size_t n) {
    if (n == 0) {
        return {0, 0};
    }
    constexpr double z = 1.959963984540054;
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(k) / nn;
    const double denom = 1 + z * z / nn;
    const double center = (p + z * z / (2 * nn)) / denom;
    const double half = z * std::sqrt(p * (1 - p) / nn + z * z / (4 * nn * nn)) / denom;
    return {center, half};
}

SweepRecord run_point(const SweepPoint &point, std::uint64_t master_seed, std::size_t workers) {
    const InitProtocol proto(point.protocol);
    struct Tally {
        std::size_t accepted = 0, failures = 0, discards = 0, restarts = 0, exhausted = 0;
    };
    workers = std::max<std::size_t>(1, std::min(workers, point.shots));
    std::vector<Tally> tallies(workers);
    const auto work = [&](std::size_t w) {
        const std::size_t begin = point.shots * w / workers;
        const std::size_t end = point.shots * (w + 1) / workers;
        Tally &t = tallies[w];
        for (std::size_t i = begin; i < end; i++) {
            const TrialResult r = proto.run_trial(master_seed, trial_stream(point.index, i));
            t.restarts += static_cast<std::size_t>(r.restarts);
            switch (r.status) {
                case TrialStatus::AcceptedCorrect:
                    t.accepted++;
                    break;
                case TrialStatus::AcceptedFailed:
                    t.accepted++;
                    t.failures++;
                    break;
                case TrialStatus::DiscardedRestart:
                    t.discards++;
                    break;
                case TrialStatus::Exhausted:
                    t.exhausted++;
                    break;
            }
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> threads;
        for (std::size_t w = 0; w < workers; w++) {
            threads.emplace_back(work, w);
        }
        for (auto &th : threads) {
            th.join();
        }
    }
    Tally sum;
    for (const auto &t : tallies) {
        sum.accepted += t.accepted;
        sum.failures += t.failures;
        sum.discards += t.discards;
        sum.restarts += t.restarts;
        sum.exhausted += t.exhausted;
    }
    SweepRecord rec;
    rec.protocol = point.protocol.protocol;
    rec.scheme = point.protocol.scheme;
    rec.distance = point.protocol.distance;
    rec.p_s = point.p_s;
    rec.shots = point.shots;
    rec.accepted = sum.accepted;
    rec.failures = sum.failures;
    rec.discards = sum.discards;
    rec.restarts_total = sum.restarts;
    rec.exhausted = sum.exhausted;
    rec.ler_total = static_cast<double>(sum.failures) / static_cast<double>(point.shots);
    rec.ler_accepted = sum.accepted ? static_cast<double>(sum.failures) / static_cast<double>(sum.accepted) : 0;
    rec.acceptance_rate =
        static_cast<double>(sum.accepted) / static_cast<double>(point.shots + sum.restarts);
    rec.wilson95 = wilson95(sum.failures, point.shots).half_width;
    rec.seed = master_seed;
    return rec;
}

std::vector<SweepRecord> run_sweep(const SweepConfig &config) {
    std::vector<SweepRecord> out;
    for (const auto &pt : sweep_points(config)) {
        out.push_back(run_point(pt, config.master_seed, config.workers));
    }
    return sorted_records(std::move(out));
}

double fit_power_law_slope(const std::vector<double> &x, const std::vector<std::size_t> &counts,
                           const std::vector<std::size_t> &n) {
    const std::size_t m = x.size();
    if (m < 2 || counts.size() != m || n.size() != m) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    double total = 0;
    for (auto c : counts) {
        total += static_cast<double>(c);
    }
    if (total == 0) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    // log mu_i = log n_i + a + b (log x_i - mean); Newton ascent on the Poisson log-likelihood.
    std::vector<double> lx(m);
    double mean = 0;
    for (std::size_t i = 0; i < m; i++) {
        if (!(x[i] > 0)) {
            return std::numeric_limits<double>::quiet_NaN();
        }
        lx[i] = std::log(x[i]);
        mean += lx[i] / static_cast<double>(m);
    }
    for (auto &v : lx) {
        v -= mean;
    }
    const auto loglik = [&](double a, double b) {
        double ll = 0;
        for (std::size_t i = 0; i < m; i++) {
            const double log_mu = std::log(static_cast<double>(n[i])) + a + b * lx[i];
            ll += static_cast<double>(counts[i]) * log_mu - std::exp(log_mu);
        }
        return ll;
    };
    double b = 1;
    double expected = 0;
    for (std::size_t i = 0; i < m; i++) {
        expected += static_cast<double>(n[i]) * std::exp(b * lx[i]);
    }
    double a = std::log(total / expected);
    double ll = loglik(a, b);
    for (int iter = 0; iter < 200; iter++) {
        double ga = 0, gb = 0, haa = 0, hab = 0, hbb = 0;
        for (std::size_t i = 0; i < m; i++) {
            const double mu = static_cast<double>(n[i]) * std::exp(a + b * lx[i]);
            const double r = static_cast<double>(counts[i]) - mu;
            ga += r;
            gb += r * lx[i];
            haa += mu;
            hab += mu * lx[i];
            hbb += mu * lx[i] * lx[i];
        }
        const double det = haa * hbb - hab * hab;
        if (!(det > 0)) {
            break;
        }
        double da = (hbb * ga - hab * gb) / det;
        double db = (haa * gb - hab * ga) / det;
        double step = 1;
        double next = loglik(a + da, b + db);
        while (!(next >= ll) && step > 1e-6) {
            step /= 2;
            next = loglik(a + step * da, b + step * db);
        }
        a += step * da;
        b += step * db;
        const bool converged = std::abs(next - ll) < 1e-12 && std::abs(step * db) < 1e-10;
        ll = next;
        if (std::abs(b) > 50) {
            return b > 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
        }
        if (converged) {
            break;
        }
    }
    return b;
}

const char *const kCsvHeader =
    "protocol,scheme,distance,p_s,shots,accepted,failures,discards,restarts_total,exhausted,ler_total,"
    "ler_accepted,acceptance_rate,wilson95,seed";

std::vector<SweepRecord> sorted_records(std::vector<SweepRecord> records) {
    std::stable_sort(records.begin(), records.end(), [](const SweepRecord &a, const SweepRecord &b) {
        return std::make_tuple(a.protocol, static_cast<int>(a.scheme), a.distance, a.p_s) <
               std::make_tuple(b.protocol, static_cast<int>(b.scheme), b.distance, b.p_s);
    });
    return records;
}

void write_csv(const std::vector<SweepRecord> &records, std::ostream &out) {
    out << kCsvHeader << '\n';
    for (const auto &r : sorted_records(records)) {
        out << r.protocol << ',' << scheme_name(r.scheme) << ',' << r.distance << ',' << format_g10(r.p_s) << ','
            << r.shots << ',' << r.accepted << ',' << r.failures << ',' << r.discards << ',' << r.restarts_total
            << ',' << r.exhausted << ',' << format_g10(r.ler_total) << ',' << format_g10(r.ler_accepted) << ','
            << format_g10(r.acceptance_rate) << ',' << format_g10(r.wilson95) << ',' << r.seed << '\n';
    }
}

void emit_csv(const std::vector<SweepRecord> &records, const std::string &path) {
    if (records.empty()) {
        throw std::invalid_argument("no records to write");
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot open '" + path + "' for writing: " + std::strerror(errno));
    }
    write_csv(records, out);
    out.flush();
    if (!out) {
        throw std::runtime_error("write to '" + path + "' failed");
    }
}

}  // namespace nps
