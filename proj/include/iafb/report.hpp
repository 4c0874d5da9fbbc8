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

// Result tables: CSV emission and parsing with a fixed column order, and
// self-contained SVG line charts with one series per strategy.

#pragma once

#include "iafb/types.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace iafb {

struct ResultRow {
    std::string scenario;
    double axis = 0.0;
    std::string strategy;
    double rate_mean = 0.0;
    double rate_se = 0.0;
    double i1_mean = 0.0;
    double i2_mean = 0.0;
    double dr_ub = 0.0;
    double r_lb = 0.0;
    int d_chosen = 0;
    int trials = 0;
};

struct ResultTable {
    std::vector<ResultRow> rows;
    std::string axis_name = "axis";
    long long attempted = 0;  // trials run over all grid points
    long long rejected = 0;   // trials dropped for a failed alignment design

    double rejection_rate() const { return attempted > 0 ? static_cast<double>(rejected) / attempted : 0.0; }
};

inline const char* csv_header() {
    return "scenario,axis,strategy,rate_mean,rate_se,i1_mean,i2_mean,dr_ub,r_lb,d_chosen,trials";
}

namespace detail {

inline std::string csv_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline double csv_parse_number(const std::string& s, int line) {
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    std::size_t used = 0;
    double x = 0.0;
    try {
        x = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size()) throw ConfigError("csv line " + std::to_string(line) + ": bad number '" + s + "'");
    return x;
}

inline int csv_parse_int(const std::string& s, int line) {
    const double x = csv_parse_number(s, line);
    if (x != std::floor(x) || std::abs(x) > 1e9) throw ConfigError("csv line " + std::to_string(line) + ": bad integer '" + s + "'");
    return static_cast<int>(x);
}

inline bool same_number(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

}  // namespace detail

inline bool operator==(const ResultRow& a, const ResultRow& b) {
    using detail::same_number;
    return a.scenario == b.scenario && same_number(a.axis, b.axis) && a.strategy == b.strategy &&
           same_number(a.rate_mean, b.rate_mean) && same_number(a.rate_se, b.rate_se) &&
           same_number(a.i1_mean, b.i1_mean) && same_number(a.i2_mean, b.i2_mean) && same_number(a.dr_ub, b.dr_ub) &&
           same_number(a.r_lb, b.r_lb) && a.d_chosen == b.d_chosen && a.trials == b.trials;
}

inline void write_csv(const ResultTable& table, std::ostream& out) {
    if (table.rows.empty()) throw ConfigError("refusing to emit an empty result table");
    using detail::csv_number;
    out << csv_header() << "\n";
    for (const auto& r : table.rows) {
        out << r.scenario << ',' << csv_number(r.axis) << ',' << r.strategy << ',' << csv_number(r.rate_mean) << ','
            << csv_number(r.rate_se) << ',' << csv_number(r.i1_mean) << ',' << csv_number(r.i2_mean) << ','
            << csv_number(r.dr_ub) << ',' << csv_number(r.r_lb) << ',' << r.d_chosen << ',' << r.trials << "\n";
    }
}

inline ResultTable read_csv(std::istream& in) {
    ResultTable table;
    std::string line;
    int lineno = 0;
    if (!std::getline(in, line)) throw ConfigError("csv: empty input");
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != csv_header()) throw ConfigError("csv: unexpected header");
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::string item;
        std::istringstream ls(line);
        while (std::getline(ls, item, ',')) f.push_back(item);
        if (line.back() == ',') f.emplace_back();
        if (f.size() != 11) throw ConfigError("csv line " + std::to_string(lineno) + ": expected 11 fields");
        ResultRow r;
        r.scenario = f[0];
        r.axis = detail::csv_parse_number(f[1], lineno);
        r.strategy = f[2];
        r.rate_mean = detail::csv_parse_number(f[3], lineno);
        r.rate_se = detail::csv_parse_number(f[4], lineno);
        r.i1_mean = detail::csv_parse_number(f[5], lineno);
        r.i2_mean = detail::csv_parse_number(f[6], lineno);
        r.dr_ub = detail::csv_parse_number(f[7], lineno);
        r.r_lb = detail::csv_parse_number(f[8], lineno);
        r.d_chosen = detail::csv_parse_int(f[9], lineno);
        r.trials = detail::csv_parse_int(f[10], lineno);
        table.rows.push_back(std::move(r));
    }
    if (table.rows.empty()) throw ConfigError("csv: no rows");
    return table;
}

inline void write_csv_file(const ResultTable& table, const std::string& path) {
    if (table.rows.empty()) throw ConfigError("refusing to emit an empty result table");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    write_csv(table, out);
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

inline ResultTable read_csv_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read '" + path + "'");
    return read_csv(in);
}

namespace detail {

inline std::string xml_escape(const std::string& s) {
    std::string o;
    for (char ch : s) {
        switch (ch) {
            case '<': o += "&lt;"; break;
            case '>': o += "&gt;"; break;
            case '&': o += "&amp;"; break;
            case '"': o += "&quot;"; break;
            default: o += ch;
        }
    }
    return o;
}

inline std::string svg_num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}

inline std::string tick_label(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", x);
    return buf;
}

/// Roughly five round tick positions covering [lo, hi].
inline std::vector<double> nice_ticks(double lo, double hi) {
    if (!(hi > lo)) {
        lo -= 1.0;
        hi += 1.0;
    }
    const double raw = (hi - lo) / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0})
        if (m * mag >= raw) {
            step = m * mag;
            break;
        }
    std::vector<double> t;
    for (double x = std::ceil(lo / step - 1e-9) * step; x <= hi + 1e-9 * step; x += step) t.push_back(std::abs(x) < 1e-12 * step ? 0.0 : x);
    return t;
}

}  // namespace detail

/// One chart of the rows of `scenario`: rate_mean against the axis value
/// with +-1 standard-error whiskers, one polyline per strategy. Leakage
/// rows (strategy prefix "leak-") are drawn in dB.
inline std::string render_svg(const ResultTable& table, const std::string& scenario, const std::string& x_label = "") {
    using detail::svg_num;
    std::map<std::string, std::vector<const ResultRow*>> series;
    std::vector<std::string> order;
    bool leakage = false;
    for (const auto& r : table.rows) {
        if (r.scenario != scenario) continue;
        if (!series.count(r.strategy)) order.push_back(r.strategy);
        series[r.strategy].push_back(&r);
        if (r.strategy.rfind("leak-", 0) == 0) leakage = true;
    }
    if (order.empty()) throw ConfigError("no rows for scenario '" + scenario + "'");
    auto yval = [&](double v) {
        if (!leakage) return v;
        return v > 0.0 ? 10.0 * std::log10(v) : std::numeric_limits<double>::quiet_NaN();
    };
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
    for (const auto& name : order)
        for (const ResultRow* r : series[name]) {
            if (leakage && r->strategy.rfind("leak-", 0) != 0) continue;
            const double y = yval(r->rate_mean);
            if (!std::isfinite(y) || !std::isfinite(r->axis)) continue;
            xmin = std::min(xmin, r->axis);
            xmax = std::max(xmax, r->axis);
            const double se = leakage ? 0.0 : (std::isfinite(r->rate_se) ? r->rate_se : 0.0);
            ymin = std::min(ymin, y - se);
            ymax = std::max(ymax, y + se);
        }
    if (!std::isfinite(xmin)) xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
    if (!leakage) ymin = std::min(ymin, 0.0);
    const auto xt = detail::nice_ticks(xmin, xmax);
    const auto yt = detail::nice_ticks(ymin, ymax);
    const double x0 = std::min(xt.front(), xmin), x1 = std::max(xt.back(), xmax);
    const double y0 = std::min(yt.front(), ymin), y1 = std::max(yt.back(), ymax);
    const double W = 720, H = 440, L = 70, R = 190, Tm = 40, B = 60;
    auto px = [&](double x) { return L + (x - x0) / (x1 - x0 == 0 ? 1 : x1 - x0) * (W - L - R); };
    auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0 == 0 ? 1 : y1 - y0) * (H - Tm - B); };
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
      << ' ' << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << detail::xml_escape(scenario)
      << "</text>\n";
    for (double y : yt) {
        o << "<line x1=\"" << L << "\" x2=\"" << W - R << "\" y1=\"" << svg_num(py(y)) << "\" y2=\"" << svg_num(py(y))
          << "\" stroke=\"#e0e0e0\"/>\n";
        o << "<text x=\"" << L - 6 << "\" y=\"" << svg_num(py(y) + 4) << "\" text-anchor=\"end\">"
          << detail::tick_label(y) << "</text>\n";
    }
    for (double x : xt) {
        o << "<line x1=\"" << svg_num(px(x)) << "\" x2=\"" << svg_num(px(x)) << "\" y1=\"" << Tm << "\" y2=\"" << H - B
          << "\" stroke=\"#f0f0f0\"/>\n";
        o << "<text x=\"" << svg_num(px(x)) << "\" y=\"" << H - B + 18 << "\" text-anchor=\"middle\">"
          << detail::tick_label(x) << "</text>\n";
    }
    o << "<rect x=\"" << L << "\" y=\"" << Tm << "\" width=\"" << W - L - R << "\" height=\"" << H - Tm - B
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    o << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 18 << "\" text-anchor=\"middle\">"
      << detail::xml_escape(x_label.empty() ? table.axis_name : x_label) << "</text>\n";
    o << "<text transform=\"translate(18," << (Tm + H - B) / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
      << (leakage ? "leakage power [dB]" : "sum rate [bits/s/Hz]") << "</text>\n";
    int idx = 0;
    for (const auto& name : order) {
        if (leakage && name.rfind("leak-", 0) != 0) continue;
        const char* colour = palette[idx % 10];
        auto rows = series[name];
        std::sort(rows.begin(), rows.end(), [](const ResultRow* a, const ResultRow* b) { return a->axis < b->axis; });
        std::string path;
        for (const ResultRow* r : rows) {
            const double y = yval(r->rate_mean);
            if (!std::isfinite(y)) continue;
            path += (path.empty() ? "" : " ") + svg_num(px(r->axis)) + "," + svg_num(py(y));
            if (!leakage && std::isfinite(r->rate_se) && r->rate_se > 0.0)
                o << "<line x1=\"" << svg_num(px(r->axis)) << "\" x2=\"" << svg_num(px(r->axis)) << "\" y1=\""
                  << svg_num(py(y - r->rate_se)) << "\" y2=\"" << svg_num(py(y + r->rate_se)) << "\" stroke=\"" << colour
                  << "\"/>\n";
            o << "<circle cx=\"" << svg_num(px(r->axis)) << "\" cy=\"" << svg_num(py(y)) << "\" r=\"2.5\" fill=\""
              << colour << "\"/>\n";
        }
        if (!path.empty())
            o << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.6\" points=\"" << path << "\"/>\n";
        const double ly = Tm + 14 + 18 * idx;
        o << "<line x1=\"" << W - R + 12 << "\" x2=\"" << W - R + 36 << "\" y1=\"" << ly << "\" y2=\"" << ly
          << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n";
        o << "<text x=\"" << W - R + 42 << "\" y=\"" << ly + 4 << "\">" << detail::xml_escape(name) << "</text>\n";
        ++idx;
    }
    o << "</svg>\n";
    return o.str();
}

inline std::vector<std::string> scenario_names(const ResultTable& table) {
    std::vector<std::string> names;
    for (const auto& r : table.rows)
        if (std::find(names.begin(), names.end(), r.scenario) == names.end()) names.push_back(r.scenario);
    return names;
}

}  // namespace iafb
