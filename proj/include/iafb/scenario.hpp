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

// Scenario descriptions: a base configuration, one sweep axis with its
// grid, and the strategies compared on every grid point. Presets encode
// the published figure setups.

#pragma once

#include "iafb/config.hpp"
#include "iafb/types.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace iafb {

enum class Axis { snr_db, n_bits, nu_d, time_index };

inline std::string to_string(Axis a) {
    switch (a) {
        case Axis::snr_db: return "snr_db";
        case Axis::n_bits: return "n_bits";
        case Axis::nu_d: return "nu_d";
        case Axis::time_index: return "time_index";
    }
    return "?";
}

inline Axis parse_axis(const std::string& s) {
    if (s == "snr_db") return Axis::snr_db;
    if (s == "n_bits") return Axis::n_bits;
    if (s == "nu_d") return Axis::nu_d;
    if (s == "time_index") return Axis::time_index;
    throw ConfigError("unknown axis '" + s + "' (snr_db, n_bits, nu_d, time_index)");
}

enum class StrategyKind { perfect, predictive, adaptive, baseline };

struct Strategy {
    StrategyKind kind = StrategyKind::adaptive;
    int D = 0;  // predictive only

    std::string name() const {
        switch (kind) {
            case StrategyKind::perfect: return "perfect";
            case StrategyKind::predictive: return "predictive:" + std::to_string(D);
            case StrategyKind::adaptive: return "adaptive";
            case StrategyKind::baseline: return "baseline";
        }
        return "?";
    }

    static Strategy parse(const std::string& s) {
        if (s == "perfect") return {StrategyKind::perfect, 0};
        if (s == "adaptive") return {StrategyKind::adaptive, 0};
        if (s == "baseline") return {StrategyKind::baseline, 0};
        const std::string prefix = "predictive:";
        if (s.rfind(prefix, 0) == 0) {
            const std::string digits = s.substr(prefix.size());
            if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
                throw ConfigError("bad strategy '" + s + "'");
            const int D = std::stoi(digits);
            if (D < 1) throw ConfigError("predictive dimension must be >= 1");
            return {StrategyKind::predictive, D};
        }
        throw ConfigError("unknown strategy '" + s + "' (perfect, predictive:D, adaptive, baseline)");
    }

    friend bool operator==(const Strategy&, const Strategy&) = default;
};

struct Scenario {
    std::string name = "custom";
    SimConfig base;
    Axis axis = Axis::snr_db;
    std::vector<double> grid;  // empty: the base value only; ignored on the time_index axis
    std::vector<Strategy> strategies{{StrategyKind::perfect, 0}, {StrategyKind::adaptive, 0}};
    int threads = 0;  // 0: hardware concurrency

    /// Grid actually swept.
    std::vector<double> points() const {
        if (axis == Axis::time_index) return {0.0};
        if (!grid.empty()) return grid;
        switch (axis) {
            case Axis::snr_db: return {base.snr_db()};
            case Axis::n_bits: return {static_cast<double>(base.N_d)};
            case Axis::nu_d: return {base.nu_D};
            default: return {0.0};
        }
    }

    /// Configuration at one grid point.
    SimConfig at(double x) const {
        SimConfig c = base;
        switch (axis) {
            case Axis::snr_db: c.P = db_to_linear(x); break;
            case Axis::n_bits:
                if (x != std::floor(x)) throw ConfigError("n_bits grid must be integral");
                c.N_d = static_cast<int>(x);
                break;
            case Axis::nu_d: c.nu_D = x; break;
            case Axis::time_index: break;
        }
        c.validate();
        return c;
    }

    void validate() const {
        if (name.empty() || name.find_first_of(",\n\r\"") != std::string::npos)
            throw ConfigError("scenario name must be non-empty without commas or quotes");
        if (strategies.empty()) throw ConfigError("at least one strategy is required");
        for (std::size_t i = 1; i < grid.size(); ++i)
            if (!(grid[i] > grid[i - 1])) throw ConfigError("grid must be strictly increasing");
        if (threads < 0) throw ConfigError("threads must be non-negative");
        base.validate();
        for (double x : points()) at(x);
        for (const auto& s : strategies)
            if (s.kind == StrategyKind::predictive && s.D > base.pilots_per_user())
                throw ConfigError("predictive dimension exceeds the pilots per user");
    }
};

inline std::vector<double> linear_grid(double first, double step, double last) {
    if (!(step > 0.0) || last < first) throw ConfigError("grid range must satisfy first <= last and step > 0");
    std::vector<double> g;
    const auto n = static_cast<long>(std::floor((last - first) / step + 1e-9));
    for (long i = 0; i <= n; ++i) g.push_back(first + static_cast<double>(i) * step);
    return g;
}

inline const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names{"fig2", "fig3", "fig4", "fig5", "fig6"};
    return names;
}

/// Figure setups.
///   fig2  leakage evolution over the payload (25 dB, nu_D 0.001, N_d 15, D 2)
///   fig3  rate versus SNR with D in {1,2,3} and adaptive switching (S 2, N_d 20)
///   fig4  rate versus feedback bits at 30 dB (nu_D 0.004, D in {1,2})
///   fig5  rate versus Doppler with T_D 7, T 30, N_d 30 at 20 dB
///   fig6  rate versus SNR with T_D 7, T 30, N_d 30
inline Scenario preset(const std::string& name) {
    using K = StrategyKind;
    Scenario sc;
    sc.name = name;
    SimConfig& c = sc.base;
    c = SimConfig{};
    c.K = 3;
    c.N = 5;
    c.S = 3;
    c.M = 15;
    c.T = 45;
    c.T_D = 0;
    c.nu_D = 0.004;
    c.N_d = 30;
    c.P = db_to_linear(30.0);
    if (name == "fig2") {
        c.nu_D = 0.001;
        c.P = db_to_linear(25.0);
        c.N_d = 15;
        c.dimension = 2;
        sc.axis = Axis::time_index;
        sc.strategies = {{K::perfect, 0}, {K::predictive, 2}};
    } else if (name == "fig3") {
        c.S = 2;
        c.N_d = 20;
        sc.axis = Axis::snr_db;
        sc.grid = linear_grid(0.0, 5.0, 40.0);
        sc.strategies = {{K::perfect, 0}, {K::predictive, 1}, {K::predictive, 2}, {K::predictive, 3}, {K::adaptive, 0}};
    } else if (name == "fig4") {
        sc.axis = Axis::n_bits;
        sc.grid = linear_grid(4.0, 2.0, 30.0);
        sc.strategies = {{K::perfect, 0}, {K::predictive, 1}, {K::predictive, 2}, {K::adaptive, 0}};
    } else if (name == "fig5") {
        c.T = 30;
        c.T_D = 7;
        c.P = db_to_linear(20.0);
        sc.axis = Axis::nu_d;
        sc.grid = linear_grid(0.001, 0.001, 0.01);
        sc.strategies = {{K::perfect, 0}, {K::predictive, 1}, {K::predictive, 2}, {K::adaptive, 0}, {K::baseline, 0}};
    } else if (name == "fig6") {
        c.T = 30;
        c.T_D = 7;
        sc.axis = Axis::snr_db;
        sc.grid = linear_grid(0.0, 5.0, 30.0);
        sc.strategies = {{K::perfect, 0}, {K::predictive, 1}, {K::predictive, 2}, {K::adaptive, 0}, {K::baseline, 0}};
    } else {
        throw ConfigError("unknown preset '" + name + "' (fig2 .. fig6)");
    }
    return sc;
}

}  // namespace iafb
