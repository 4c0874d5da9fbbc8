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

// Flat key=value configuration files. Blank lines and '#' comments are
// ignored; unknown or repeated keys are errors.
//
//   K, N, S, M, T, T_D        integers
//   nu_D | velocity_kmh       normalized Doppler, or speed at 2.5 GHz / 14 kHz symbols
//   P | snr_db                power per subcarrier, linear or in dB
//   N_d                       feedback bits per link
//   pdp                       comma list of S tap powers summing to N (default flat)
//   dimension                 integer D or "adaptive"
//   quantizer                 perturbation | explicit-rvq
//   spectrum                  clarke | flat
//   seed, trials, rotations, threads
//   name, axis, grid, strategies
//
// grid accepts "a,b,c" or "first:step:last"; strategies is a comma list of
// perfect, predictive:D, adaptive, baseline.

#pragma once

#include "iafb/config.hpp"
#include "iafb/scenario.hpp"
#include "iafb/types.hpp"
#include "iafb/units.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace iafb {

namespace detail {

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) out.push_back(trim(item));
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

inline double parse_double(const std::string& key, const std::string& v) {
    std::size_t used = 0;
    double x = 0.0;
    try {
        x = std::stod(v, &used);
    } catch (const std::exception&) {
        throw ConfigError(key + ": '" + v + "' is not a number");
    }
    if (used != v.size() || !std::isfinite(x)) throw ConfigError(key + ": '" + v + "' is not a finite number");
    return x;
}

inline long long parse_integer(const std::string& key, const std::string& v) {
    std::size_t used = 0;
    long long x = 0;
    try {
        x = std::stoll(v, &used);
    } catch (const std::exception&) {
        throw ConfigError(key + ": '" + v + "' is not an integer");
    }
    if (used != v.size()) throw ConfigError(key + ": '" + v + "' is not an integer");
    return x;
}

inline int parse_int(const std::string& key, const std::string& v) {
    const long long x = parse_integer(key, v);
    if (x < -1000000000LL || x > 1000000000LL) throw ConfigError(key + ": value out of range");
    return static_cast<int>(x);
}

inline std::uint64_t parse_u64(const std::string& key, const std::string& v) {
    if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos)
        throw ConfigError(key + ": '" + v + "' is not an unsigned integer");
    try {
        return std::stoull(v);
    } catch (const std::exception&) {
        throw ConfigError(key + ": value out of range");
    }
}

inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace detail

/// "a,b,c" or "first:step:last".
inline std::vector<double> parse_grid(const std::string& text, const std::string& key = "grid") {
    const std::string v = detail::trim(text);
    if (v.empty()) throw ConfigError(key + ": empty grid");
    if (v.find(':') != std::string::npos) {
        const auto parts = detail::split(v, ':');
        if (parts.size() != 3) throw ConfigError(key + ": range must be first:step:last");
        return linear_grid(detail::parse_double(key, parts[0]), detail::parse_double(key, parts[1]),
                           detail::parse_double(key, parts[2]));
    }
    std::vector<double> g;
    for (const auto& item : detail::split(v, ',')) g.push_back(detail::parse_double(key, item));
    return g;
}

inline std::vector<Strategy> parse_strategies(const std::string& text) {
    std::vector<Strategy> out;
    for (const auto& item : detail::split(detail::trim(text), ',')) {
        const Strategy s = Strategy::parse(item);
        for (const auto& t : out)
            if (t == s) throw ConfigError("strategy '" + item + "' listed twice");
        out.push_back(s);
    }
    if (out.empty()) throw ConfigError("strategies: empty list");
    return out;
}

inline const std::set<std::string>& config_keys() {
    static const std::set<std::string> keys{"K",     "N",         "S",        "M",         "T",
                                            "T_D",   "nu_D",      "velocity_kmh", "P",     "snr_db",
                                            "N_d",   "pdp",       "dimension", "quantizer", "spectrum",
                                            "seed",  "trials",    "rotations", "threads",  "name",
                                            "axis",  "grid",      "strategies"};
    return keys;
}

/// Key/value pairs of a configuration text, in file order.
inline std::map<std::string, std::string> read_key_values(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (!config_keys().count(key)) throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        if (value.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty value for '" + key + "'");
        if (!kv.emplace(key, value).second)
            throw ConfigError("line " + std::to_string(lineno) + ": key '" + key + "' given twice");
    }
    return kv;
}

/// Applies a configuration text on top of `sc` and validates the result.
inline Scenario apply_config(Scenario sc, const std::string& text) {
    using namespace detail;
    const auto kv = read_key_values(text);
    if (kv.count("nu_D") && kv.count("velocity_kmh")) throw ConfigError("give nu_D or velocity_kmh, not both");
    if (kv.count("P") && kv.count("snr_db")) throw ConfigError("give P or snr_db, not both");
    SimConfig& c = sc.base;
    for (const auto& [key, v] : kv) {
        if (key == "K") c.K = parse_int(key, v);
        else if (key == "N") c.N = parse_int(key, v);
        else if (key == "S") c.S = parse_int(key, v);
        else if (key == "M") c.M = parse_int(key, v);
        else if (key == "T") c.T = parse_int(key, v);
        else if (key == "T_D") c.T_D = parse_int(key, v);
        else if (key == "nu_D") c.nu_D = parse_double(key, v);
        else if (key == "velocity_kmh") c.nu_D = units::doppler_from_velocity(parse_double(key, v));
        else if (key == "P") c.P = parse_double(key, v);
        else if (key == "snr_db") c.P = db_to_linear(parse_double(key, v));
        else if (key == "N_d") c.N_d = parse_int(key, v);
        else if (key == "pdp") {
            c.pdp.clear();
            for (const auto& item : split(v, ',')) c.pdp.push_back(parse_double(key, item));
        } else if (key == "dimension") {
            if (v == "adaptive") c.dimension.reset();
            else c.dimension = parse_int(key, v);
        } else if (key == "quantizer") {
            if (v == "perturbation") c.quantizer = QuantizerMode::perturbation;
            else if (v == "explicit-rvq") c.quantizer = QuantizerMode::explicit_rvq;
            else throw ConfigError("quantizer must be perturbation or explicit-rvq");
        } else if (key == "spectrum") {
            if (v == "clarke") c.spectrum = DopplerShape::clarke;
            else if (v == "flat") c.spectrum = DopplerShape::flat;
            else throw ConfigError("spectrum must be clarke or flat");
        } else if (key == "seed") c.seed = parse_u64(key, v);
        else if (key == "trials") c.trials = parse_int(key, v);
        else if (key == "rotations") c.rotations = parse_int(key, v);
        else if (key == "threads") sc.threads = parse_int(key, v);
        else if (key == "name") sc.name = v;
        else if (key == "axis") {
            const Axis a = parse_axis(v);
            if (a != sc.axis && !kv.count("grid")) sc.grid.clear();
            sc.axis = a;
        } else if (key == "grid") sc.grid = parse_grid(v);
        else if (key == "strategies") sc.strategies = parse_strategies(v);
    }
    sc.validate();
    return sc;
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read configuration file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Complete configuration text; apply_config(Scenario{}, format_config(sc)) reproduces sc.
inline std::string format_config(const Scenario& sc) {
    using detail::format_double;
    const SimConfig& c = sc.base;
    std::ostringstream o;
    o << "name = " << sc.name << "\n";
    o << "K = " << c.K << "\nN = " << c.N << "\nS = " << c.S << "\nM = " << c.M << "\n";
    o << "T = " << c.T << "\nT_D = " << c.T_D << "\n";
    o << "nu_D = " << format_double(c.nu_D) << "\n";
    o << "P = " << format_double(c.P) << "\n";
    o << "N_d = " << c.N_d << "\n";
    if (!c.pdp.empty()) {
        o << "pdp = ";
        for (std::size_t i = 0; i < c.pdp.size(); ++i) o << (i ? "," : "") << format_double(c.pdp[i]);
        o << "\n";
    }
    o << "dimension = " << (c.dimension ? std::to_string(*c.dimension) : std::string("adaptive")) << "\n";
    o << "quantizer = " << to_string(c.quantizer) << "\n";
    o << "spectrum = " << to_string(c.spectrum) << "\n";
    o << "seed = " << c.seed << "\ntrials = " << c.trials << "\nrotations = " << c.rotations << "\n";
    o << "threads = " << sc.threads << "\n";
    o << "axis = " << to_string(sc.axis) << "\n";
    if (!sc.grid.empty()) {
        o << "grid = ";
        for (std::size_t i = 0; i < sc.grid.size(); ++i) o << (i ? "," : "") << format_double(sc.grid[i]);
        o << "\n";
    }
    o << "strategies = ";
    for (std::size_t i = 0; i < sc.strategies.size(); ++i) o << (i ? "," : "") << sc.strategies[i].name();
    o << "\n";
    return o.str();
}

}  // namespace iafb
