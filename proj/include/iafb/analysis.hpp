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

// Analytic leakage bounds, the rate-loss upper bound with its prediction
// and quantization parts, and adaptive subspace dimension switching.

#pragma once

#include "iafb/channel.hpp"
#include "iafb/config.hpp"
#include "iafb/dps.hpp"
#include "iafb/feedback.hpp"
#include "iafb/ia.hpp"
#include "iafb/predictor.hpp"
#include "iafb/types.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace iafb {

/// Upper bound on E[d_c^2] for RVQ with c = 1:
/// Gamma(1/(DS-1))/(DS-1) * 2^(-N_d/(DS-1)); zero when DS = 1.
inline double q_bound(double bits, int DS) {
    if (DS < 1) throw ConfigError("dimension must be positive");
    if (DS == 1) return 0.0;
    const double e = 1.0 / (DS - 1);
    return std::tgamma(e) * e * std::exp2(-bits * e);
}

/// zeta[m] = f[m]^T lambda^s f[m], largest over taps (all taps coincide for a flat PDP).
inline double zeta(const DpsBasis& basis, const CoefficientStatistics& stats, int m) {
    const RVec f = basis.f(m);
    double z = 0.0;
    for (const auto& lambda : stats.lambda_s) z = std::max(z, f.dot(lambda * f));
    return z;
}

/// J~ = N^2 P / (S d) * E|q|^2 * MSE.
inline double prediction_leakage_bound(double mse, int N, int S, double P, int d, double q_norm_sq = 1.0) {
    return static_cast<double>(N) * N * P / (static_cast<double>(S) * d) * q_norm_sq * mse;
}

/// J^ = N P DS / (d (DS-1)) * E|q|^2 * zeta * Q.
inline double quantization_leakage_bound(double zeta_m, double Q, int N, double P, int DS, int d,
                                         double q_norm_sq = 1.0) {
    if (DS < 2) return 0.0;
    return N * P * DS / (static_cast<double>(d) * (DS - 1)) * q_norm_sq * zeta_m * Q;
}

/// Prediction and quantization statistics of every transmitter's links
/// (pilot set k) for one subspace dimension, over the payload.
struct BoundTerms {
    int D = 0;
    double Q = 0.0;
    std::vector<std::vector<MseTerms>> mse;  // [transmitter][payload offset]
    std::vector<std::vector<double>> zeta;   // [transmitter][payload offset]
};

inline std::vector<double> assumed_flat_pdp(const SimConfig& cfg) {
    return std::vector<double>(static_cast<std::size_t>(cfg.S), static_cast<double>(cfg.N) / cfg.S);
}

inline BoundTerms bound_terms(const SimConfig& cfg, int D) {
    BoundTerms bt;
    bt.D = D;
    bt.Q = q_bound(cfg.N_d, D * cfg.S);
    const DopplerSpectrum truth(cfg.spectrum, cfg.nu_D);
    const double snr = cfg.N * cfg.P / cfg.S;
    const auto pdp = assumed_flat_pdp(cfg);
    for (int k = 1; k <= cfg.K; ++k) {
        const auto pilots = pilot_positions(k, cfg);
        const DpsBasis basis = compute_basis(cfg.M, cfg.nu_D, cfg.horizon(), pilots, D);
        const auto stats = coefficient_covariance(basis, pdp, cfg.P);
        std::vector<MseTerms> mse;
        std::vector<double> z;
        for (int m = cfg.payload_first(); m <= cfg.payload_last(); ++m) {
            mse.push_back(mse_analytic(m, basis, snr, truth));
            z.push_back(zeta(basis, stats, m));
        }
        bt.mse.push_back(std::move(mse));
        bt.zeta.push_back(std::move(z));
    }
    return bt;
}

struct RateLossReport {
    int D = 0;
    double Q = 0.0;
    double dr_ub = 0.0;            // combined bound
    double dr_prediction = 0.0;    // prediction-only term
    double dr_quantization = 0.0;  // quantization-only term
    std::vector<double> mse_term;    // J~ per stream pair at each payload index, transmitter 1, E|q|^2 = 1
    std::vector<double> quant_term;  // J^ per stream pair, same convention
    std::vector<double> zeta;        // transmitter 1
};

/// Delta R_ub = (1/(NT)) sum_k sum_m d_k log2(1 + E[I_k[m]]) with
/// E[I_k] = NP ((d_k - 1)/d_k X_k + sum_{l != k} X_l) and
/// X_l = (N/S) MSE_l[m] + DS zeta_l[m] Q / (DS - 1), where X_l belongs to
/// the links driven by transmitter l. Equal X_l gives NP (K - 1/d_k) X.
inline RateLossReport rate_loss_upper_bound(const SimConfig& cfg, const BoundTerms& bt) {
    const auto d = stream_allocation(cfg.K, cfg.N);
    const int DS = bt.D * cfg.S;
    const double qscale = DS > 1 ? static_cast<double>(DS) / (DS - 1) * bt.Q : 0.0;
    const double NP = cfg.N * cfg.P;
    RateLossReport r;
    r.D = bt.D;
    r.Q = bt.Q;
    for (int t = 0; t < cfg.T; ++t) {
        std::vector<double> xp(cfg.K), xq(cfg.K);
        for (int l = 0; l < cfg.K; ++l) {
            xp[l] = static_cast<double>(cfg.N) / cfg.S * bt.mse[l][t].total();
            xq[l] = qscale * bt.zeta[l][t];
        }
        for (int k = 0; k < cfg.K; ++k) {
            auto load = [&](const std::vector<double>& x) {
                double s = (d[k] - 1.0) / d[k] * x[k];
                for (int l = 0; l < cfg.K; ++l)
                    if (l != k) s += x[l];
                return NP * s;
            };
            const double ip = load(xp), iq = load(xq);
            r.dr_ub += d[k] * std::log2(1.0 + ip + iq);
            r.dr_prediction += d[k] * std::log2(1.0 + ip);
            r.dr_quantization += d[k] * std::log2(1.0 + iq);
        }
        r.mse_term.push_back(prediction_leakage_bound(bt.mse[0][t].total(), cfg.N, cfg.S, cfg.P, 1));
        r.quant_term.push_back(quantization_leakage_bound(bt.zeta[0][t], bt.Q, cfg.N, cfg.P, DS, 1));
        r.zeta.push_back(bt.zeta[0][t]);
    }
    const double norm = 1.0 / (static_cast<double>(cfg.N) * cfg.T);
    r.dr_ub *= norm;
    r.dr_prediction *= norm;
    r.dr_quantization *= norm;
    return r;
}

inline RateLossReport rate_loss_upper_bound(const SimConfig& cfg, int D) {
    return rate_loss_upper_bound(cfg, bound_terms(cfg, D));
}

/// Largest candidate dimension: D_ub(M, nu_D, P) capped by the pilots per user.
inline int dimension_cap(const SimConfig& cfg) {
    if (!(cfg.P > 0.0)) return 1;
    return std::min(optimal_dimension_unquantized(cfg.M, cfg.nu_D, cfg.P), cfg.pilots_per_user());
}

struct SwitchingDecision {
    int D = 1;
    std::vector<RateLossReport> candidates;  // D = 1 .. cap, rejected dimensions omitted
};

/// D* = argmin over D in 1..D_ub of Delta R_ub, ties to the smaller D.
inline SwitchingDecision adaptive_sds(const SimConfig& cfg) {
    SwitchingDecision out;
    double best = std::numeric_limits<double>::infinity();
    const int cap = dimension_cap(cfg);
    for (int D = 1; D <= cap; ++D) {
        try {
            auto report = rate_loss_upper_bound(cfg, D);
            if (report.dr_ub < best) {
                best = report.dr_ub;
                out.D = D;
            }
            out.candidates.push_back(std::move(report));
        } catch (const DimensionRejected&) {
        }
    }
    if (out.candidates.empty()) throw DimensionRejected("no admissible subspace dimension");
    return out;
}

/// R_lb = E[R_sum perfect] - Delta R_ub; may be negative.
inline double rate_lower_bound(double perfect_rate_mean, double dr_ub) { return perfect_rate_mean - dr_ub; }

}  // namespace iafb
