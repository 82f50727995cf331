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

#include "nps/cli.h"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

#include "nps/code_lattice.h"
#include "nps/harness.h"
#include "nps/init_protocols.h"
#include "nps/lattice_surgery.h"
#include "nps/nonpauli_algebra.h"

namespace nps {

namespace {

constexpr double kFidelityFloor = 1 - 1e-9;

std::string fmt(const char *f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), f, v);
    return buf;
}

std::string cplx(Complex c) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%+.9f%+.9fi", c.real(), c.imag());
    return buf;
}

std::string bits(std::uint64_t key, std::size_t width) {
    std::string s;
    for (std::size_t k = 0; k < width; k++) {
        s.push_back(((key >> k) & 1) ? '1' : '0');
    }
    return s;
}

Su2Params random_params(RngStream &rng) {
    return {2 * std::numbers::pi * rng.uniform(), std::numbers::pi * rng.uniform(), 2 * std::numbers::pi * rng.uniform()};
}

std::array<Complex, 2> random_logical(RngStream &rng) {
    Complex a(rng.uniform() - 0.5, rng.uniform() - 0.5);
    Complex b(rng.uniform() - 0.5, rng.uniform() - 0.5);
    const double n = std::sqrt(std::norm(a) + std::norm(b));
    return {a / n, b / n};
}

int cmd_algebra(std::ostream &out, bool have_single, Su2Params single, std::size_t random_n, std::uint64_t seed) {
    AlgebraReport worst;
    const auto fold = [&](const AlgebraReport &r) {
        worst.unitarity = std::max(worst.unitarity, r.unitarity);
        worst.involution_a = std::max(worst.involution_a, r.involution_a);
        worst.involution_b = std::max(worst.involution_b, r.involution_b);
        worst.involution_c = std::max(worst.involution_c, r.involution_c);
        worst.anticommutation = std::max(worst.anticommutation, r.anticommutation);
        worst.s_c_definition = std::max(worst.s_c_definition, r.s_c_definition);
        worst.conjugation = std::max(worst.conjugation, r.conjugation);
        worst.eigenvectors = std::max(worst.eigenvectors, r.eigenvectors);
        worst.cross_qubit_commutation = std::max(worst.cross_qubit_commutation, r.cross_qubit_commutation);
        worst.steane_substitution = std::max(worst.steane_substitution, r.steane_substitution);
    };
    std::size_t count = 0;
    if (have_single) {
        fold(check_cross_qubit_commutation(build_basis(single)));
        count = 1;
    } else {
        RngStream rng(seed, 0);
        for (std::size_t i = 0; i < random_n; i++) {
            fold(check_cross_qubit_commutation(build_basis(random_params(rng))));
        }
        count = random_n;
    }
    const double tol = 1e-12;
    out << "samples " << count << "\n";
    out << "residual                  max\n";
    const std::pair<const char *, double> rows[] = {
        {"unitarity", worst.unitarity},
        {"involution_a", worst.involution_a},
        {"involution_b", worst.involution_b},
        {"involution_c", worst.involution_c},
        {"anticommutation", worst.anticommutation},
        {"s_c_definition", worst.s_c_definition},
        {"conjugation", worst.conjugation},
        {"eigenvectors", worst.eigenvectors},
        {"cross_qubit_commutation", worst.cross_qubit_commutation},
        {"steane_substitution", worst.steane_substitution},
    };
    for (const auto &[name, v] : rows) {
        char line[96];
        std::snprintf(line, sizeof(line), "%-25s %.3e\n", name, v);
        out << line;
    }
    const bool pass = worst.worst() < tol;
    out << (pass ? "PASS" : "FAIL") << " (tolerance 1e-12)\n";
    return pass ? 0 : 1;
}

void dump_layout(std::ostream &out, const RotatedSurfaceLayout &layout) {
    out << "distance " << layout.distance << (layout.flipped ? " (flipped)" : "") << ", data qubits "
        << layout.num_data() << ", ancilla " << layout.ancilla_index << "\n";
    for (std::size_t r = 0; r < layout.distance; r++) {
        out << "  ";
        for (std::size_t c = 0; c < layout.distance; c++) {
            out << fmt("%3.0f", static_cast<double>(layout.qubit_at(r, c)));
        }
        out << "\n";
    }
    for (const auto &t : layout.tiles) {
        out << "  tile " << t.tile_id << ' ' << tile_kind_char(t.kind) << " [";
        for (std::size_t k = 0; k < t.qubits.size(); k++) {
            out << (k ? " " : "") << t.qubits[k];
        }
        out << "]\n";
    }
    const auto chains = logical_chains(layout);
    out << "  x chain (A):";
    for (auto q : chains.x_chain.qubits) {
        out << ' ' << q;
    }
    out << "\n  z chain (B):";
    for (auto q : chains.z_chain.qubits) {
        out << ' ' << q;
    }
    out << "\n  canonical order:";
    for (auto k : layout.canonical_order()) {
        out << ' ' << layout.tiles[k].tile_id;
    }
    out << "\n";
}

int cmd_layout(std::ostream &out, std::size_t d, bool flipped) {
    const RotatedSurfaceLayout layout = build_layout(d, flipped);
    dump_layout(out, layout);
    const LayoutReport rep = validate_layout(layout);
    for (const auto &v : rep.violations) {
        out << "  violation: " << v << "\n";
    }
    out << "layout " << (rep.ok() ? "valid" : "INVALID") << "\n";
    bool ok = rep.ok();
    if (d <= 3) {
        const OperatorBasis q = build_basis({0.7, 1.1, 0.3});
        for (BoundaryKind kind : {BoundaryKind::Rough, BoundaryKind::Smooth}) {
            const MergedLayout m = build_merged_layout(d, kind, pauli_basis(), q, 0, d * d, flipped);
            out << m.describe();
            const auto mr = validate_merged_layout(m);
            out << "  commutator " << fmt("%.2e", mr.max_commutator) << ", product residual "
                << fmt("%.2e", mr.product_residual) << ", generators " << mr.generator_count << "\n";
            ok = ok && mr.ok();
        }
    }
    return ok ? 0 : 1;
}

int cmd_trajectory(std::ostream &out, std::size_t d, Scheme scheme, bool have_params, Su2Params params,
                   bool allow_large) {
    ProtocolConfig cfg;
    cfg.protocol = 2;
    cfg.distance = d;
    cfg.scheme = scheme;
    if (have_params) {
        cfg.params = params;
    }
    const auto table = build_trajectory_table(cfg, allow_large);
    const InitProtocol proto(cfg);
    out << "distance " << d << ", scheme " << scheme_name(scheme) << ", gamma " << fmt("%.9f", proto.params().gamma)
        << ", theta " << fmt("%.9f", proto.params().theta) << ", phi " << fmt("%.9f", proto.params().phi) << "\n";
    out << "trajectory (canonical order)  probability  <0_L|psi>  <1_L|psi>\n";
    const std::size_t width = table->layout().tiles.size();
    for (const auto &e : table->entries()) {
        out << bits(e->key, width) << "  " << fmt("%.12f", e->probability) << "  " << cplx(e->logical[0]) << "  "
            << cplx(e->logical[1]) << "\n";
    }
    const double total = table->total_probability();
    const ClusteringReport c = table->clustering();
    out << "entries " << c.trajectories << ", total probability " << fmt("%.15f", total) << "\n";
    out << "clustering: " << c.distinct_logical_states << " distinct logical states, majority fraction "
        << fmt("%.6f", c.majority_fraction) << " (probability " << fmt("%.6f", c.majority_probability)
        << "), majority state (" << cplx(c.majority_state[0]) << ", " << cplx(c.majority_state[1]) << ")\n";
    return std::abs(total - 1) <= 1e-9 ? 0 : 1;
}

int cmd_surgery(std::ostream &out, std::size_t d, std::uint64_t seed) {
    if (d < 2 || d > 3) {
        throw CLI::ValidationError("--distance", "surgery supports d = 2 or 3");
    }
    RngStream rng(seed, 0);
    const OperatorBasis q = build_basis(random_params(rng));
    bool ok = true;
    for (BoundaryKind kind : {BoundaryKind::Rough, BoundaryKind::Smooth}) {
        const MergedLayout m = build_merged_layout(d, kind, pauli_basis(), q);
        const auto rep = validate_merged_layout(m);
        out << m.describe();
        out << "  commutator " << fmt("%.2e", rep.max_commutator) << ", product residual "
            << fmt("%.2e", rep.product_residual) << "\n";
        ok = ok && rep.ok();
        for (int input = 0; input < 3; input++) {
            const auto psi_p = random_logical(rng);
            const auto psi_q = random_logical(rng);
            const MergeVerification v = verify_merge(m, psi_p, psi_q, d == 2, 8, seed + input);
            for (const auto &b : v.branches) {
                out << "  input " << input << " m=" << b.m << " merged " << fmt("%.12f", b.merged_fidelity)
                    << " split " << fmt("%.12f", b.split_fidelity) << " route gap " << fmt("%.1e", b.route_gap)
                    << "\n";
            }
            ok = ok && v.worst_fidelity() >= kFidelityFloor && v.worst_route_gap() <= 1e-9;
        }
    }
    out << (ok ? "PASS" : "FAIL") << "\n";
    return ok ? 0 : 1;
}

int cmd_cnot(std::ostream &out, std::uint64_t seed) {
    RngStream rng(seed, 0);
    const CnotSetup setup = build_cnot_setup(build_basis(random_params(rng)));
    const double r = 1 / std::sqrt(2.0);
    const std::pair<const char *, std::array<std::array<Complex, 2>, 2>> inputs[] = {
        {"|00>", {{{1, 0}, {1, 0}}}}, {"|01>", {{{1, 0}, {0, 1}}}}, {"|10>", {{{0, 1}, {1, 0}}}},
        {"|11>", {{{0, 1}, {0, 1}}}}, {"|+0>", {{{r, r}, {1, 0}}}},
    };
    bool ok = true;
    for (const auto &[name, in] : inputs) {
        const auto branches = verify_cnot(setup, in[0], in[1]);
        double worst = 1;
        for (const auto &b : branches) {
            worst = std::min(worst, b.fidelity);
        }
        out << name << " branches " << branches.size() << " worst fidelity " << fmt("%.12f", worst) << "\n";
        ok = ok && worst >= kFidelityFloor;
    }
    out << (ok ? "PASS" : "FAIL") << "\n";
    return ok ? 0 : 1;
}

}  // namespace

int cli_dispatch(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Non-Pauli stabilizer surface-code simulator"};
    app.require_subcommand(1);

    auto *sweep = app.add_subcommand("sweep", "Monte Carlo sweep from a key = value config file");
    std::string config_path;
    std::uint64_t seed_override = 0;
    std::string out_override;
    std::size_t workers_override = 0;
    std::size_t shots_override = 0;
    sweep->add_option("config", config_path, "config file")->required();
    auto *seed_opt = sweep->add_option("--seed", seed_override, "master seed");
    auto *out_opt = sweep->add_option("--out", out_override, "CSV output path");
    auto *workers_opt = sweep->add_option("--workers", workers_override, "worker threads")->check(CLI::PositiveNumber);
    auto *shots_opt = sweep->add_option("--shots", shots_override, "trials per point")->check(CLI::PositiveNumber);

    auto *algebra = app.add_subcommand("algebra-check", "residuals of the non-Pauli operator algebra");
    double gamma = 0, theta = 0, phi = 0;
    std::size_t random_n = 0;
    std::uint64_t seed = 1;
    auto *g_opt = algebra->add_option("--gamma", gamma);
    auto *t_opt = algebra->add_option("--theta", theta);
    auto *p_opt = algebra->add_option("--phi", phi);
    auto *r_opt = algebra->add_option("--random", random_n, "number of random parameter sets");
    algebra->add_option("--seed", seed);
    r_opt->excludes(g_opt)->excludes(t_opt)->excludes(p_opt);

    auto *layout = app.add_subcommand("layout-dump", "print a patch layout and its merged seams");
    std::size_t distance = 3;
    bool flipped = false;
    layout->add_option("--distance", distance)->required()->check(CLI::Range(2, 4));
    layout->add_flag("--flipped", flipped, "swap the checkerboard");

    auto *traj = app.add_subcommand("trajectory-table", "exhaustive protocol-2 trajectory table");
    std::string scheme_text = "non-pauli";
    bool allow_large = false;
    traj->add_option("--distance", distance)->required()->check(CLI::Range(2, 4));
    auto *tg = traj->add_option("--gamma", gamma);
    auto *tt = traj->add_option("--theta", theta);
    auto *tp = traj->add_option("--phi", phi);
    traj->add_option("--scheme", scheme_text)->check(CLI::IsMember({"non-pauli", "pauli"}));
    traj->add_flag("--allow-large", allow_large, "permit d = 4 enumeration");

    auto *surgery = app.add_subcommand("surgery-verify", "noiseless merge/split checks");
    surgery->add_option("--distance", distance)->required();
    surgery->add_option("--seed", seed);

    auto *cnot = app.add_subcommand("cnot-verify", "logical CNOT over every readout branch");
    cnot->add_option("--seed", seed);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        if (e.get_exit_code() == 0) {
            return app.exit(e, out, err);
        }
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (*sweep) {
            SweepConfig cfg = load_sweep_config(config_path);
            if (*seed_opt) {
                cfg.master_seed = seed_override;
            }
            if (*out_opt) {
                cfg.output_path = out_override;
            }
            if (*workers_opt) {
                cfg.workers = workers_override;
            }
            if (*shots_opt) {
                cfg.shots = shots_override;
            }
            cfg.validate();
            const auto records = run_sweep(cfg);
            if (cfg.output_path.empty()) {
                write_csv(records, out);
            } else {
                emit_csv(records, cfg.output_path);
            }
            return 0;
        }
        if (*algebra) {
            const bool single = g_opt->count() || t_opt->count() || p_opt->count();
            if (!single && random_n == 0) {
                random_n = 100;
            }
            return cmd_algebra(out, single, {gamma, theta, phi}, random_n, seed);
        }
        if (*layout) {
            return cmd_layout(out, distance, flipped);
        }
        if (*traj) {
            const bool have = tg->count() || tt->count() || tp->count();
            const Scheme scheme = scheme_text == "pauli" ? Scheme::Pauli : Scheme::NonPauli;
            return cmd_trajectory(out, distance, scheme, have, {gamma, theta, phi}, allow_large);
        }
        if (*surgery) {
            return cmd_surgery(out, distance, seed);
        }
        if (*cnot) {
            return cmd_cnot(out, seed);
        }
    } catch (const CLI::Error &e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument &e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::runtime_error &e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

}  // namespace nps
