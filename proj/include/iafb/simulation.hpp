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

// Monte-Carlo orchestration. A Plan holds everything that depends on the
// configuration only (bases, coefficient statistics, codebooks, bounds,
// the switching decision); run_trial draws one realization of all K^2
// links and evaluates every requested strategy on it.

#pragma once

#include "iafb/analysis.hpp"
#include "iafb/baseline.hpp"
#include "iafb/channel.hpp"
#include "iafb/config.hpp"
#include "iafb/dps.hpp"
#include "iafb/feedback.hpp"
#include "iafb/ia.hpp"
#include "iafb/predictor.hpp"
#include "iafb/report.hpp"
#include "iafb/scenario.hpp"
#include "iafb/types.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace iafb {

/// Stream tags of stream_seed.
namespace stream {
constexpr std::uint64_t channel = 1;
constexpr std::uint64_t noise = 2;
constexpr std::uint64_t quantization = 3;
constexpr std::uint64_t alignment = 4;
constexpr std::uint64_t codebook = 5;
}  // namespace stream

/// Configuration-level state of one subspace dimension.
struct DimensionPlan {
    int D = 0;
    bool available = false;
    std::string reason;                         // why the dimension is unavailable
    std::vector<DpsBasis> basis;                // per transmitter
    std::vector<CoefficientStatistics> stats;   // per transmitter
    std::optional<Codebook> codebook;           // explicit quantizer only, dimension DS
    BoundTerms terms;
    RateLossReport bound;
};

struct Plan {
    SimConfig cfg;
    std::vector<int> d;   // streams per user
    int d_star = 1;       // adaptive choice
    int d_ub = 1;         // unquantized optimum, baseline dimension
    int leakage_D = 0;    // 0: no leakage decomposition
    std::map<int, DimensionPlan> dims;
    std::vector<DpsBasis> baseline_basis;
    std::optional<Codebook> baseline_codebook;
    std::optional<FadingSynthesizer> synth;
};

namespace detail {

inline DimensionPlan plan_dimension(const SimConfig& cfg, int D) {
    DimensionPlan p;
    p.D = D;
    try {
        const auto pdp = cfg.power_delay_profile();
        for (int l = 1; l <= cfg.K; ++l) {
            p.basis.push_back(compute_basis(cfg.M, cfg.nu_D, cfg.horizon(), pilot_positions(l, cfg), D));
            p.stats.push_back(coefficient_covariance(p.basis.back(), pdp, cfg.P));
        }
        p.terms = bound_terms(cfg, D);
        p.bound = rate_loss_upper_bound(cfg, p.terms);
        if (cfg.quantizer == QuantizerMode::explicit_rvq) {
            Rng rng(stream_seed(cfg.seed, stream::codebook, static_cast<std::uint64_t>(D * cfg.S)));
            p.codebook = Codebook::random(cfg.N_d, D * cfg.S, rng);
        }
        p.available = true;
    } catch (const DimensionRejected& e) {
        p.available = false;
        p.reason = e.what();
    }
    return p;
}

}  // namespace detail

/// Precomputes every configuration-dependent quantity the strategies need.
/// `leakage_dimension` > 0 also prepares the leakage decomposition.
inline Plan make_plan(const SimConfig& cfg, const std::vector<Strategy>& strategies, int leakage_dimension = 0) {
    cfg.validate();
    if (!(cfg.P > 0.0)) throw ConfigError("simulation needs P > 0");
    Plan plan;
    plan.cfg = cfg;
    plan.d = stream_allocation(cfg.K, cfg.N);
    plan.d_ub = dimension_cap(cfg);
    plan.leakage_D = leakage_dimension;
    plan.synth.emplace(cfg.horizon(), DopplerSpectrum(cfg.spectrum, cfg.nu_D));
    std::vector<int> needed;
    if (leakage_dimension > 0) needed.push_back(leakage_dimension);
    for (const auto& s : strategies) {
        if (s.kind == StrategyKind::predictive) needed.push_back(s.D);
        if (s.kind == StrategyKind::adaptive) {
            const auto decision = adaptive_sds(cfg);
            plan.d_star = decision.D;
            needed.push_back(decision.D);
        }
        if (s.kind == StrategyKind::baseline) {
            for (int l = 1; l <= cfg.K; ++l)
                plan.baseline_basis.push_back(
                    compute_basis(cfg.M, cfg.nu_D, cfg.horizon(), pilot_positions(l, cfg), plan.d_ub));
            if (cfg.quantizer == QuantizerMode::explicit_rvq) {
                Rng rng(stream_seed(cfg.seed, stream::codebook, 0, static_cast<std::uint64_t>(cfg.S)));
                plan.baseline_codebook = Codebook::random(cfg.N_d, cfg.S, rng);
            }
        }
    }
    for (int D : needed)
        if (!plan.dims.count(D)) plan.dims.emplace(D, detail::plan_dimension(cfg, D));
    return plan;
}

/// Per-payload-index series of one strategy within a trial. I1 and I2 are
/// averaged over the streams of all users.
struct StrategySeries {
    std::vector<double> rate;
    std::vector<double> i1;
    std::vector<double> i2;
};

/// Leakage split of one trial, averaged over interfering stream pairs.
struct LeakageSeries {
    std::vector<double> mc_prediction;     // (NP/d_l)|(w - w~)^T b|^2
    std::vector<double> mc_quantization;   // (NP/d_l)|w~^T b|^2
    std::vector<double> bound_prediction;  // J~ with the trial's |q|^2
    std::vector<double> bound_quantization;
    std::vector<double> q_norm_sq;
};

struct TrialRecord {
    std::uint64_t trial = 0;
    bool rejected = false;
    std::string reason;
    std::vector<StrategySeries> series;  // aligned with the strategy list
    std::optional<LeakageSeries> leakage;
};

namespace detail {

inline std::uint64_t strategy_key(const Strategy& s, int D) {
    return static_cast<std::uint64_t>(s.kind) * 1000u + static_cast<std::uint64_t>(D);
}

inline void append_budget(StrategySeries& out, const LinkBudget& b, int N) {
    double i1 = 0.0, i2 = 0.0;
    int streams = 0;
    for (std::size_t k = 0; k < b.I1.size(); ++k) {
        i1 += b.I1[k].sum();
        i2 += b.I2[k].sum();
        streams += static_cast<int>(b.I1[k].size());
    }
    out.rate.push_back(sum_rate(b, N));
    out.i1.push_back(i1 / streams);
    out.i2.push_back(i2 / streams);
}

/// Unquantized and quantized predicted frequency responses of every link
/// at every payload index, for one subspace dimension.
struct PredictedChannels {
    std::vector<ChannelSet> quantized;    // per payload offset
    std::vector<ChannelSet> unquantized;  // filled only when requested
};

inline PredictedChannels predict_links(const Plan& plan, const DimensionPlan& dp,
                                       const std::vector<std::vector<PilotObservation>>& obs, Rng& qrng,
                                       bool keep_unquantized) {
    const SimConfig& c = plan.cfg;
    const int DS = dp.D * c.S;
    PredictedChannels out;
    out.quantized.assign(static_cast<std::size_t>(c.T), ChannelSet(c.K, c.N));
    if (keep_unquantized) out.unquantized.assign(static_cast<std::size_t>(c.T), ChannelSet(c.K, c.N));
    for (int k = 0; k < c.K; ++k) {
        for (int l = 0; l < c.K; ++l) {
            const DpsBasis& basis = dp.basis[l];
            const auto est = estimate_subspace(obs[k][l], basis, c.S);
            const CVec x = whiten(est.eta, dp.stats[l]);
            QuantizedDirection q = dp.codebook ? quantize_explicit(x, *dp.codebook)
                                               : quantize_perturbation(x, c.N_d, qrng);
            const CVec eta_rec = unwhiten(q.direction * std::sqrt(static_cast<double>(DS)), dp.stats[l]);
            for (int t = 0; t < c.T; ++t) {
                const int m = c.payload_first() + t;
                out.quantized[t](k, l) = predict_stacked(eta_rec, basis, m, c.N).freq;
                if (keep_unquantized) out.unquantized[t](k, l) = predict_stacked(est.eta, basis, m, c.N).freq;
            }
        }
    }
    return out;
}

inline void accumulate_leakage(LeakageSeries& out, const Plan& plan, const DimensionPlan& dp, int t,
                               const IaSolution& sol, const ChannelSet& W, const ChannelSet& Wu) {
    const SimConfig& c = plan.cfg;
    const double N = c.N, P = c.P, S = c.S;
    const int DS = dp.D * c.S;
    const CMat DN = dft_matrix(c.N);
    double mp = 0.0, mq = 0.0, bp = 0.0, bq = 0.0, qn = 0.0;
    int pairs = 0;
    for (int k = 0; k < c.K; ++k)
        for (int i = 0; i < sol.d[k]; ++i)
            for (int l = 0; l < c.K; ++l)
                for (int j = 0; j < sol.d[l]; ++j) {
                    if (k == l && i == j) continue;
                    const double dl = sol.d[l];
                    const CVec b = sol.U[k].col(i).conjugate().cwiseProduct(sol.V[l].col(j));
                    const CVec z = W(k, l) - Wu(k, l);
                    const double q2 = (DN * b).head(c.S).squaredNorm();
                    mp += N * P / dl * std::norm(z.cwiseProduct(b).sum());
                    mq += N * P / dl * std::norm(Wu(k, l).cwiseProduct(b).sum());
                    bp += N * N * P / (S * dl) * q2 * dp.terms.mse[l][t].total();
                    bq += quantization_leakage_bound(dp.terms.zeta[l][t], dp.terms.Q, c.N, P, DS, sol.d[l], q2);
                    qn += q2;
                    ++pairs;
                }
    out.mc_prediction.push_back(mp / pairs);
    out.mc_quantization.push_back(mq / pairs);
    out.bound_prediction.push_back(bp / pairs);
    out.bound_quantization.push_back(bq / pairs);
    out.q_norm_sq.push_back(qn / pairs);
}

}  // namespace detail

/// One realization of all links evaluated under every strategy. Channel and
/// noise draws are shared by all strategies; quantization draws depend on
/// the subspace dimension only, so predictive:D and adaptive with D* = D
/// coincide. A trial whose alignment design fails is marked rejected.
inline TrialRecord run_trial(const Plan& plan, const std::vector<Strategy>& strategies, std::uint64_t trial) {
    const SimConfig& c = plan.cfg;
    TrialRecord rec;
    rec.trial = trial;
    rec.series.resize(strategies.size());

    Rng crng(stream_seed(c.seed, trial, stream::channel));
    const auto pdp = c.power_delay_profile();
    std::vector<std::vector<LinkChannel>> links(c.K);
    for (int k = 0; k < c.K; ++k)
        for (int l = 0; l < c.K; ++l) links[k].push_back(generate_link(c.N, pdp, *plan.synth, crng));

    Rng nrng(stream_seed(c.seed, trial, stream::noise));
    std::vector<std::vector<PilotObservation>> obs(c.K);
    for (int k = 0; k < c.K; ++k)
        for (int l = 0; l < c.K; ++l) {
            const auto pilots = pilot_positions(l + 1, c);
            obs[k].push_back(observe_pilots(links[k][l], pilots, c.P, nrng));
        }

    std::vector<ChannelSet> truth(static_cast<std::size_t>(c.T), ChannelSet(c.K, c.N));
    for (int t = 0; t < c.T; ++t)
        for (int k = 0; k < c.K; ++k)
            for (int l = 0; l < c.K; ++l)
                truth[t](k, l) = links[k][l].frequency_at(c.payload_first() + t);

    auto ia_rng = [&](const Strategy& s, int D, int t) {
        return Rng(stream_seed(c.seed, trial, stream::alignment,
                               detail::strategy_key(s, D) * 100000u + static_cast<std::uint64_t>(t)));
    };

    std::map<int, StrategySeries> by_dimension;
    auto predictive_series = [&](int D) -> StrategySeries {
        if (auto it = by_dimension.find(D); it != by_dimension.end()) return it->second;
        const DimensionPlan& dp = plan.dims.at(D);
        if (!dp.available) throw DimensionRejected(dp.reason);
        Rng qrng(stream_seed(c.seed, trial, stream::quantization, static_cast<std::uint64_t>(D)));
        const bool leak = plan.leakage_D == D;
        const auto pred = detail::predict_links(plan, dp, obs, qrng, leak);
        StrategySeries out;
        if (leak) rec.leakage.emplace();
        for (int t = 0; t < c.T; ++t) {
            Rng rng = ia_rng({StrategyKind::predictive, D}, D, t);
            const IaSolution sol = design_ia(pred.quantized[t], c.P, c.rotations, rng);
            detail::append_budget(out, evaluate_links(sol, truth[t], c.P), c.N);
            if (leak) detail::accumulate_leakage(*rec.leakage, plan, dp, t, sol, truth[t], pred.unquantized[t]);
        }
        by_dimension.emplace(D, out);
        return out;
    };

    try {
        if (plan.leakage_D > 0 && plan.dims.at(plan.leakage_D).available) predictive_series(plan.leakage_D);
        for (std::size_t si = 0; si < strategies.size(); ++si) {
            const Strategy& s = strategies[si];
            StrategySeries& out = rec.series[si];
            switch (s.kind) {
                case StrategyKind::perfect:
                    for (int t = 0; t < c.T; ++t) {
                        Rng rng = ia_rng(s, 0, t);
                        const IaSolution sol = design_ia(truth[t], c.P, c.rotations, rng);
                        detail::append_budget(out, evaluate_links(sol, truth[t], c.P), c.N);
                    }
                    break;
                case StrategyKind::predictive:
                case StrategyKind::adaptive: {
                    const int D = s.kind == StrategyKind::adaptive ? plan.d_star : s.D;
                    if (plan.dims.at(D).available) out = predictive_series(D);
                    break;
                }
                case StrategyKind::baseline: {
                    Rng qrng(stream_seed(c.seed, trial, stream::quantization, 1000000u));
                    ChannelSet H(c.K, c.N);
                    const CMat F = dft_columns(c.N, c.S);
                    for (int k = 0; k < c.K; ++k)
                        for (int l = 0; l < c.K; ++l) {
                            const auto cir = estimate_static_cir(obs[k][l], plan.baseline_basis[l], c.S);
                            const QuantizedDirection q = plan.baseline_codebook
                                                             ? quantize_explicit(cir.h_avg, *plan.baseline_codebook)
                                                             : quantize_perturbation(cir.h_avg, c.N_d, qrng);
                            H(k, l) = F * reconstruct_cir(q, c.N);
                        }
                    Rng rng = ia_rng(s, 0, 0);
                    const IaSolution sol = design_ia(H, c.P, c.rotations, rng);
                    for (int t = 0; t < c.T; ++t)
                        detail::append_budget(out, evaluate_links(sol, truth[t], c.P), c.N);
                    break;
                }
            }
        }
    } catch (const TrialRejected& e) {
        rec.rejected = true;
        rec.reason = e.what();
        rec.series.assign(strategies.size(), {});
        rec.leakage.reset();
    }
    return rec;
}

/// Runs trials [0, count) on `threads` workers; records are returned in
/// trial order regardless of scheduling.
inline std::vector<TrialRecord> run_trials(const Plan& plan, const std::vector<Strategy>& strategies, int count,
                                           int threads = 0) {
    if (count < 1) throw ConfigError("trial count must be positive");
    std::vector<TrialRecord> records(static_cast<std::size_t>(count));
    unsigned workers = threads > 0 ? static_cast<unsigned>(threads) : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(count));
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    auto work = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= count || failed.load()) return;
            try {
                records[static_cast<std::size_t>(i)] = run_trial(plan, strategies, static_cast<std::uint64_t>(i));
            } catch (...) {
                if (!failed.exchange(true)) failure = std::current_exception();
                return;
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);
    return records;
}

struct Summary {
    double mean = std::numeric_limits<double>::quiet_NaN();
    double se = std::numeric_limits<double>::quiet_NaN();
    int n = 0;
};

/// Mean and standard error of per-trial values; se = 0 for a single value.
inline Summary summarize(const std::vector<double>& v) {
    Summary s;
    s.n = static_cast<int>(v.size());
    if (v.empty()) return s;
    double sum = 0.0;
    for (double x : v) sum += x;
    s.mean = sum / s.n;
    if (s.n == 1) {
        s.se = 0.0;
        return s;
    }
    double ss = 0.0;
    for (double x : v) ss += (x - s.mean) * (x - s.mean);
    s.se = std::sqrt(ss / (s.n - 1) / s.n);
    return s;
}

namespace detail {

inline double frame_mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

}  // namespace detail

/// Leakage dimension of a time-index scenario: the configured dimension or D*.
inline int leakage_dimension(const SimConfig& cfg) { return cfg.dimension ? *cfg.dimension : adaptive_sds(cfg).D; }

/// Trial records of one grid point reduced to table rows.
inline std::vector<ResultRow> summarize_point(const Scenario& sc, const Plan& plan, double axis_value,
                                              const std::vector<TrialRecord>& records) {
    const SimConfig& c = plan.cfg;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<const TrialRecord*> ok;
    for (const auto& r : records)
        if (!r.rejected) ok.push_back(&r);

    double perfect_mean = nan;
    for (std::size_t si = 0; si < sc.strategies.size(); ++si)
        if (sc.strategies[si].kind == StrategyKind::perfect) {
            std::vector<double> v;
            for (const auto* r : ok) v.push_back(detail::frame_mean(r->series[si].rate));
            perfect_mean = summarize(v).mean;
        }

    auto bound_of = [&](const Strategy& s) -> std::pair<double, int> {
        switch (s.kind) {
            case StrategyKind::perfect: return {0.0, 0};
            case StrategyKind::predictive: {
                const auto& dp = plan.dims.at(s.D);
                return {dp.available ? dp.bound.dr_ub : nan, s.D};
            }
            case StrategyKind::adaptive: return {plan.dims.at(plan.d_star).bound.dr_ub, plan.d_star};
            case StrategyKind::baseline: return {nan, plan.d_ub};
        }
        return {nan, 0};
    };

    std::vector<ResultRow> rows;
    const bool per_index = sc.axis == Axis::time_index;
    const int points = per_index ? c.T : 1;
    for (int t = 0; t < points; ++t) {
        const double x = per_index ? static_cast<double>(c.payload_first() + t) : axis_value;
        for (std::size_t si = 0; si < sc.strategies.size(); ++si) {
            const Strategy& s = sc.strategies[si];
            std::vector<double> rate, i1, i2;
            for (const auto* r : ok) {
                const auto& ser = r->series[si];
                if (ser.rate.empty()) continue;
                rate.push_back(per_index ? ser.rate[t] : detail::frame_mean(ser.rate));
                i1.push_back(per_index ? ser.i1[t] : detail::frame_mean(ser.i1));
                i2.push_back(per_index ? ser.i2[t] : detail::frame_mean(ser.i2));
            }
            const auto sr = summarize(rate);
            const auto [dr, D] = bound_of(s);
            ResultRow row;
            row.scenario = sc.name;
            row.axis = x;
            row.strategy = s.name();
            row.rate_mean = sr.mean;
            row.rate_se = sr.se;
            row.i1_mean = summarize(i1).mean;
            row.i2_mean = summarize(i2).mean;
            row.dr_ub = dr;
            row.r_lb = s.kind == StrategyKind::perfect ? perfect_mean : rate_lower_bound(perfect_mean, dr);
            row.d_chosen = D;
            row.trials = sr.n;
            rows.push_back(row);
        }
        if (plan.leakage_D > 0) {
            const std::pair<const char*, std::vector<double> LeakageSeries::*> parts[] = {
                {"leak-pred-mc", &LeakageSeries::mc_prediction},
                {"leak-quant-mc", &LeakageSeries::mc_quantization},
                {"leak-pred-bound", &LeakageSeries::bound_prediction},
                {"leak-quant-bound", &LeakageSeries::bound_quantization},
            };
            for (const auto& [name, member] : parts) {
                std::vector<double> v;
                for (const auto* r : ok)
                    if (r->leakage) v.push_back(((*r->leakage).*member)[t]);
                const auto sv = summarize(v);
                ResultRow row;
                row.scenario = sc.name;
                row.axis = x;
                row.strategy = name;
                row.rate_mean = sv.mean;
                row.rate_se = sv.se;
                row.i1_mean = nan;
                row.i2_mean = nan;
                row.dr_ub = nan;
                row.r_lb = nan;
                row.d_chosen = plan.leakage_D;
                row.trials = sv.n;
                rows.push_back(row);
            }
        }
    }
    return rows;
}

/// Every grid point of a scenario with trial-level parallelism and
/// single-threaded aggregation.
inline ResultTable run_scenario(const Scenario& sc) {
    sc.validate();
    ResultTable table;
    table.axis_name = to_string(sc.axis);
    for (double x : sc.points()) {
        const SimConfig cfg = sc.at(x);
        const int leak = sc.axis == Axis::time_index ? leakage_dimension(cfg) : 0;
        const Plan plan = make_plan(cfg, sc.strategies, leak);
        const auto records = run_trials(plan, sc.strategies, cfg.trials, sc.threads);
        table.attempted += static_cast<long long>(records.size());
        for (const auto& r : records) table.rejected += r.rejected ? 1 : 0;
        auto rows = summarize_point(sc, plan, x, records);
        table.rows.insert(table.rows.end(), rows.begin(), rows.end());
    }
    return table;
}

}  // namespace iafb
