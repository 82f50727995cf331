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

#include <doctest.h>

#include <cmath>
#include <sstream>

#include "nps/harness.h"

using namespace nps;

namespace {

SweepConfig parse(const std::string &text) {
    std::istringstream in(text);
    return parse_sweep_config(in);
}

}  // namespace

TEST_CASE("config parsing accepts lists, comments and overrides") {
    const SweepConfig c = parse(
        "# sweep\n"
        "protocol = 2, 1\n"
        "scheme = pauli,non-pauli\n"
        "distance = 3\n"
        "noise.p_s = 0.01, 0.001   # two points\n"
        "noise.split = 2:1:1\n"
        "noise.p_t = 0.002\n"
        "shots = 100\n"
        "seed = 42\n"
        "workers = 3\n"
        "target = coeff:1,0,0,1\n");
    CHECK(c.protocols == std::vector<int>{2, 1});
    CHECK(c.schemes.size() == 2);
    CHECK(c.p_s_values.size() == 2);
    CHECK(c.split_a == 2);
    CHECK(c.p_t == doctest::Approx(0.002));
    CHECK(c.shots == 100);
    CHECK(c.master_seed == 42);
    CHECK(c.workers == 3);
    CHECK(std::abs(c.target_alpha - Complex(1 / std::sqrt(2.0))) < 1e-15);

    const auto pts = sweep_points(c);
    REQUIRE(pts.size() == 8);
    CHECK(pts[0].protocol.protocol == 1);
    CHECK(pts[0].protocol.scheme == Scheme::NonPauli);
    CHECK(pts[0].p_s == doctest::Approx(0.001));
    CHECK(pts[1].p_s == doctest::Approx(0.01));
    CHECK(pts[7].protocol.protocol == 2);
    CHECK(pts[7].protocol.scheme == Scheme::Pauli);
    for (std::size_t k = 0; k < pts.size(); k++) {
        CHECK(pts[k].index == k);
        CHECK(pts[k].shots == 100);
    }
    CHECK(pts[0].protocol.noise.p_a == doctest::Approx(0.0005));
}

TEST_CASE("config parsing rejects malformed input") {
    CHECK_THROWS_AS(parse("bogus = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse("seed = 1\nseed = 2\n"), ConfigError);
    CHECK_THROWS_AS(parse("distance = 7\n"), ConfigError);
    CHECK_THROWS_AS(parse("protocol = 3\n"), ConfigError);
    CHECK_THROWS_AS(parse("scheme = clifford\n"), ConfigError);
    CHECK_THROWS_AS(parse("noise.p_s = abc\n"), ConfigError);
    CHECK_THROWS_AS(parse("noise.p_s = 0.9\n"), ConfigError);
    CHECK_THROWS_AS(parse("shots = 0\n"), ConfigError);
    CHECK_THROWS_AS(parse("workers = 0\n"), ConfigError);
    CHECK_THROWS_AS(parse("no equals sign\n"), ConfigError);
    CHECK_THROWS_AS(parse("seed =\n"), ConfigError);
    CHECK_THROWS_AS(load_sweep_config("/nonexistent/sweep.cfg"), ConfigError);
    CHECK(parse("shots = auto\n").shots == 0);
    CHECK(default_shots(2) == 200000);
    CHECK(default_shots(3) == 50000);
    CHECK(default_shots(4) == 10000);
}

TEST_CASE("trial streams are disjoint across points") {
    CHECK(trial_stream(0, 5) == 5);
    CHECK(trial_stream(1, 0) == (std::uint64_t{1} << 32));
    CHECK(trial_stream(3, 7) != trial_stream(7, 3));
}

TEST_CASE("Wilson interval matches the closed form") {
    const double z = 1.959963984540054;
    for (auto [k, n] : {std::pair<std::size_t, std::size_t>{0, 100}, {5, 100}, {50, 100}, {100, 100}, {3, 50000}}) {
        const double p = static_cast<double>(k) / static_cast<double>(n);
        const double nn = static_cast<double>(n);
        const double denom = 1 + z * z / nn;
        const double center = (p + z * z / (2 * nn)) / denom;
        const double half = z / denom * std::sqrt(p * (1 - p) / nn + z * z / (4 * nn * nn));
        const WilsonInterval w = wilson95(k, n);
        CHECK(w.center == doctest::Approx(center).epsilon(1e-12));
        CHECK(w.half_width == doctest::Approx(half).epsilon(1e-12));
        CHECK(w.lower() >= -1e-15);
        CHECK(w.upper() <= 1 + 1e-15);
    }
}

TEST_CASE("power-law slope fit") {
    const std::vector<double> x{1e-3, 3e-3, 1e-2};
    const std::vector<std::size_t> n{1000000, 1000000, 1000000};
    for (double slope : {1.0, 2.0}) {
        std::vector<std::size_t> counts;
        for (double xi : x) {
            counts.push_back(static_cast<std::size_t>(std::llround(1e6 * 50 * std::pow(xi, slope))));
        }
        CHECK(fit_power_law_slope(x, counts, n) == doctest::Approx(slope).epsilon(0.01));
    }
    CHECK(std::isnan(fit_power_law_slope(x, {0, 0, 0}, n)));
    CHECK(std::isnan(fit_power_law_slope({1e-3}, {1}, {10})));
    const double diverging = fit_power_law_slope(x, {0, 0, 5}, n);
    CHECK((std::isinf(diverging) || diverging > 5));
    CHECK(diverging > 0);
}

TEST_CASE("CSV layout") {
    SweepRecord a;
    a.protocol = 2;
    a.scheme = Scheme::Pauli;
    a.distance = 3;
    a.p_s = 0.003;
    a.shots = 10;
    a.accepted = 9;
    a.failures = 1;
    a.ler_total = 0.1;
    a.ler_accepted = 1.0 / 9.0;
    a.acceptance_rate = 0.9;
    a.wilson95 = 0.125;
    a.seed = 7;
    SweepRecord b = a;
    b.protocol = 1;
    b.scheme = Scheme::NonPauli;
    std::ostringstream os;
    write_csv({a, b}, os);
    const std::string expect = std::string(kCsvHeader) +
                               "\n1,non-pauli,3,0.003,10,9,1,0,0,0,0.1,0.1111111111,0.9,0.125,7\n"
                               "2,pauli,3,0.003,10,9,1,0,0,0,0.1,0.1111111111,0.9,0.125,7\n";
    CHECK(os.str() == expect);
    CHECK_THROWS_AS(emit_csv({a}, "/nonexistent-dir/out.csv"), std::runtime_error);
}

TEST_CASE("noiseless points report zero logical error") {
    SweepConfig c;
    c.protocols = {1, 2};
    c.schemes = {Scheme::NonPauli, Scheme::Pauli};
    c.distances = {2};
    c.p_s_values = {0};
    c.shots = 200;
    const auto records = run_sweep(c);
    REQUIRE(records.size() == 4);
    for (const auto &r : records) {
        CHECK(r.failures == 0);
        CHECK(r.ler_total == 0);
        CHECK(r.discards == 0);
        CHECK(r.accepted == r.shots);
    }
}

TEST_CASE("point results do not depend on the worker count") {
    SweepConfig c;
    c.protocols = {1};
    c.schemes = {Scheme::Pauli};
    c.distances = {2};
    c.p_s_values = {0.02};
    c.shots = 300;
    const auto pts = sweep_points(c);
    const SweepRecord one = run_point(pts[0], 11, 1);
    const SweepRecord four = run_point(pts[0], 11, 4);
    std::ostringstream a, b;
    write_csv({one}, a);
    write_csv({four}, b);
    CHECK(a.str() == b.str());
    CHECK(one.accepted + one.discards + one.exhausted == one.shots);
}
