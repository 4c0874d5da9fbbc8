// SPDX-License-Identifier: Apache-2.0
//
// iafb - channel prediction and limited feedback for interference alignment
// Copyright (C) 2026 The iafb Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// Command line front end.
//
//   iafb simulate --config FILE [--preset figN] [--seed U64] [--trials N] [--out DIR]
//   iafb sweep    --axis A --grid G [--strategies LIST] [simulate options]
//   iafb dps-info --M 15 --nu 0.004 [--snr-db 30]
//   iafb bound    --config FILE | --preset figN [--snr-grid G --bits-grid G] [--out FILE]
//   iafb plot     --from CSV [--out DIR]
//
// Exit status: 0 success, 2 configuration error, 3 more than 1% of the
// trials rejected by the alignment design, 1 anything else.

#include "iafb/analysis.hpp"
#include "iafb/config_io.hpp"
#include "iafb/dps.hpp"
#include "iafb/report.hpp"
#include "iafb/scenario.hpp"
#include "iafb/simulation.hpp"
#include "iafb/units.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace fs = std::filesystem;
using namespace iafb;

namespace {

constexpr int exit_config = 2;
constexpr int exit_rejections = 3;
constexpr double max_rejection_rate = 0.01;

struct ScenarioOptions {
    std::string config;
    std::string preset;
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    std::optional<int> threads;
    std::string out = ".";
};

void add_scenario_options(CLI::App* cmd, ScenarioOptions& o) {
    cmd->add_option("--config", o.config, "key=value configuration file");
    cmd->add_option("--preset", o.preset, "figure preset applied before the configuration file")
        ->check(CLI::IsMember(preset_names()));
    cmd->add_option("--seed", o.seed, "master seed");
    cmd->add_option("--trials", o.trials, "Monte-Carlo trials per grid point")->check(CLI::PositiveNumber);
    cmd->add_option("--threads", o.threads, "worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
}

Scenario load_scenario(const ScenarioOptions& o) {
    if (o.config.empty() && o.preset.empty()) throw ConfigError("give --config, --preset, or both");
    Scenario sc = o.preset.empty() ? Scenario{} : preset(o.preset);
    if (!o.config.empty()) sc = apply_config(sc, read_text_file(o.config));
    if (o.seed) sc.base.seed = *o.seed;
    if (o.trials) sc.base.trials = *o.trials;
    if (o.threads) sc.threads = *o.threads;
    sc.validate();
    return sc;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

int simulate(const Scenario& sc, const std::string& out_dir) {
    const fs::path dir(out_dir);
    fs::create_directories(dir);
    const auto start = std::chrono::steady_clock::now();
    const ResultTable table = run_scenario(sc);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const fs::path csv = dir / (sc.name + ".csv");
    write_csv_file(table, csv.string());
    write_text(dir / (sc.name + ".svg"), render_svg(table, sc.name));
    write_text(dir / (sc.name + ".cfg"), format_config(sc));
    std::printf("%s: %zu rows, %lld trials, %lld rejected (%.2f%%), %.1f s -> %s\n", sc.name.c_str(), table.rows.size(),
                table.attempted, table.rejected, 100.0 * table.rejection_rate(), seconds, csv.string().c_str());
    if (table.rejection_rate() > max_rejection_rate) {
        std::fprintf(stderr, "error: rejection rate %.2f%% exceeds 1%%\n", 100.0 * table.rejection_rate());
        return exit_rejections;
    }
    return 0;
}

int dps_info(int M, std::optional<double> nu, std::optional<double> kmh, std::optional<double> snr_db) {
    if (nu.has_value() == kmh.has_value()) throw ConfigError("give exactly one of --nu and --velocity");
    const double nu_d = nu ? *nu : units::doppler_from_velocity(*kmh);
    if (M < 1) throw ConfigError("M must be positive");
    if (!(nu_d > 0.0) || nu_d >= 0.5) throw ConfigError("nu must lie in (0, 1/2)");
    const RVec kappa = dps_concentrations(M, nu_d);
    std::printf("M = %d, nu_D = %.6g (%.3g km/h at 2.5 GHz), 2 nu_D M = %.4g\n", M, nu_d,
                units::velocity_from_doppler(nu_d), 2.0 * nu_d * M);
    std::printf("%4s %14s %14s\n", "p", "eigenvalue", "kappa");
    for (int p = 0; p < M; ++p)
        std::printf("%4d %14.6e %14.6e\n", p, kappa(p) / (2.0 * nu_d), kappa(p));
    if (snr_db) {
        const double P = db_to_linear(*snr_db);
        std::printf("D_ub(P = %.4g dB) = %d\n", *snr_db, optimal_dimension_unquantized(M, nu_d, P));
    }
    return 0;
}

int bound(const Scenario& sc, const std::string& snr_grid, const std::string& bits_grid, const std::string& out) {
    const SimConfig& c = sc.base;
    if (snr_grid.empty() != bits_grid.empty()) throw ConfigError("--snr-grid and --bits-grid go together");
    if (snr_grid.empty()) {
        std::printf("%s: K=%d N=%d S=%d M=%d T=%d T_D=%d nu_D=%.6g SNR=%.4g dB N_d=%d\n", sc.name.c_str(), c.K, c.N, c.S,
                    c.M, c.T, c.T_D, c.nu_D, c.snr_db(), c.N_d);
        const auto decision = adaptive_sds(c);
        std::printf("%3s %12s %12s %12s %12s\n", "D", "Q", "dR_ub", "dR_pred", "dR_quant");
        for (const auto& r : decision.candidates)
            std::printf("%3d %12.5e %12.6f %12.6f %12.6f\n", r.D, r.Q, r.dr_ub, r.dr_prediction, r.dr_quantization);
        std::printf("D_ub = %d, D* = %d\n", dimension_cap(c), decision.D);
        return 0;
    }
    std::ostringstream csv;
    csv << "snr_db,N_d,d_star,dr_ub\n";
    for (double snr : parse_grid(snr_grid, "--snr-grid"))
        for (double bits : parse_grid(bits_grid, "--bits-grid")) {
            SimConfig g = c;
            g.P = db_to_linear(snr);
            if (bits != std::floor(bits) || bits < 0) throw ConfigError("--bits-grid must hold non-negative integers");
            g.N_d = static_cast<int>(bits);
            g.validate();
            const auto d = adaptive_sds(g);
            double best = 0.0;
            for (const auto& r : d.candidates)
                if (r.D == d.D) best = r.dr_ub;
            csv << detail::format_double(snr) << ',' << g.N_d << ',' << d.D << ',' << detail::format_double(best) << "\n";
        }
    if (out.empty()) {
        std::cout << csv.str();
    } else {
        write_text(out, csv.str());
        std::printf("wrote %s\n", out.c_str());
    }
    return 0;
}

int plot(const std::string& from, const std::string& out_dir, const std::string& x_label) {
    const ResultTable table = read_csv_file(from);
    const fs::path dir = out_dir.empty() ? fs::path(from).parent_path() : fs::path(out_dir);
    if (!dir.empty()) fs::create_directories(dir);
    for (const auto& name : scenario_names(table)) {
        const fs::path svg = dir / (name + ".svg");
        write_text(svg, render_svg(table, name, x_label));
        std::printf("wrote %s\n", svg.string().c_str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Channel prediction and limited feedback for interference alignment"};
    app.require_subcommand(1);

    ScenarioOptions sim;
    auto* cmd_sim = app.add_subcommand("simulate", "run a scenario and write CSV, SVG and the effective configuration");
    add_scenario_options(cmd_sim, sim);
    cmd_sim->add_option("--out", sim.out, "output directory");

    ScenarioOptions sw;
    std::string sw_axis, sw_grid, sw_strategies;
    auto* cmd_sweep = app.add_subcommand("sweep", "run a scenario along an explicit axis and grid");
    add_scenario_options(cmd_sweep, sw);
    cmd_sweep->add_option("--out", sw.out, "output directory");
    cmd_sweep->add_option("--axis", sw_axis, "snr_db, n_bits, nu_d or time_index")->required();
    cmd_sweep->add_option("--grid", sw_grid, "a,b,c or first:step:last");
    cmd_sweep->add_option("--strategies", sw_strategies, "perfect,predictive:D,adaptive,baseline");

    int dps_M = 15;
    std::optional<double> dps_nu, dps_kmh, dps_snr;
    auto* cmd_dps = app.add_subcommand("dps-info", "Slepian eigenvalues, energy concentrations and D_ub");
    cmd_dps->add_option("--M", dps_M, "window length")->capture_default_str();
    cmd_dps->add_option("--nu", dps_nu, "normalized Doppler bandwidth");
    cmd_dps->add_option("--velocity", dps_kmh, "speed in km/h instead of --nu");
    cmd_dps->add_option("--snr-db", dps_snr, "report D_ub at this SNR");

    ScenarioOptions bo;
    std::string bo_snr, bo_bits, bo_out;
    auto* cmd_bound = app.add_subcommand("bound", "rate-loss bound per dimension, or a D* map over SNR and bits");
    add_scenario_options(cmd_bound, bo);
    cmd_bound->add_option("--snr-grid", bo_snr, "SNR grid in dB for the D* map");
    cmd_bound->add_option("--bits-grid", bo_bits, "feedback-bit grid for the D* map");
    cmd_bound->add_option("--out", bo_out, "CSV file for the D* map (default stdout)");

    std::string plot_from, plot_out, plot_xlabel;
    auto* cmd_plot = app.add_subcommand("plot", "render SVG charts from a result CSV");
    cmd_plot->add_option("--from", plot_from, "result CSV")->required();
    cmd_plot->add_option("--out", plot_out, "output directory (default: next to the CSV)");
    cmd_plot->add_option("--xlabel", plot_xlabel, "x-axis label");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_config;
    }

    try {
        if (cmd_sim->parsed()) return simulate(load_scenario(sim), sim.out);
        if (cmd_sweep->parsed()) {
            Scenario sc = load_scenario(sw);
            sc.axis = parse_axis(sw_axis);
            sc.grid = sw_grid.empty() ? std::vector<double>{} : parse_grid(sw_grid);
            if (!sw_strategies.empty()) sc.strategies = parse_strategies(sw_strategies);
            sc.validate();
            return simulate(sc, sw.out);
        }
        if (cmd_dps->parsed()) return dps_info(dps_M, dps_nu, dps_kmh, dps_snr);
        if (cmd_bound->parsed()) return bound(load_scenario(bo), bo_snr, bo_bits, bo_out);
        if (cmd_plot->parsed()) return plot(plot_from, plot_out, plot_xlabel);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return exit_config;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
