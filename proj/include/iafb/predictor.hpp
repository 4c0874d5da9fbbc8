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

// Reduced-rank subspace estimation and prediction. Per-subcarrier
// coefficients are solved against the Slepian basis at the pilot slots,
// moved to the delay domain where the N - S channel-free taps are dropped,
// and evaluated at arbitrary time indices through f[m].

#pragma once

#include "iafb/channel.hpp"
#include "iafb/dps.hpp"
#include "iafb/spectrum.hpp"
#include "iafb/types.hpp"

#include <cmath>
#include <complex>
#include <vector>

namespace iafb {

/// Subspace coefficients of one link.
struct SubspaceEstimate {
    CMat phi;    // D x N, column n = phi^n
    CMat gamma;  // D x S, column s = gamma^s
    CVec eta;    // DS, tap-major stack of the gamma columns

    int D() const { return static_cast<int>(phi.rows()); }
    int S() const { return static_cast<int>(gamma.cols()); }
};

/// phi^n = G^-1 U^(P)T g'^n for every subcarrier n.
inline CMat estimate_coefficients(const PilotObservation& obs, const DpsBasis& basis) {
    if (obs.count() != static_cast<int>(basis.pilots.size()))
        throw ConfigError("observation count does not match the basis pilot set");
    for (int i = 0; i < obs.count(); ++i)
        if (obs.positions[i] != basis.pilots[i]) throw ConfigError("observation positions differ from the basis pilot set");
    if (obs.count() < basis.D) throw DimensionRejected("fewer pilots than subspace dimensions");
    return basis.estimator.cast<cplx>() * obs.values;
}

/// Inverse unitary DFT across subcarriers, all N delay columns.
inline CMat delay_domain_full(const CMat& phi) {
    const int N = static_cast<int>(phi.cols());
    return (dft_matrix(N).adjoint() * phi.transpose()).transpose();
}

/// [gamma^1 .. gamma^N]^T = D_N^H [phi^1 .. phi^N]^T truncated to the first S taps.
inline CMat to_delay_domain(const CMat& phi, int S) {
    if (S < 1 || S > phi.cols()) throw ConfigError("tap count must lie in 1..N");
    return delay_domain_full(phi).leftCols(S);
}

/// eta = [gamma^1; ...; gamma^S].
inline CVec stack_taps(const CMat& gamma) {
    CVec eta(gamma.size());
    for (Eigen::Index s = 0; s < gamma.cols(); ++s) eta.segment(s * gamma.rows(), gamma.rows()) = gamma.col(s);
    return eta;
}

inline CMat unstack_taps(const CVec& eta, int D) {
    if (D < 1 || eta.size() % D != 0) throw ConfigError("stacked length is not a multiple of D");
    const Eigen::Index S = eta.size() / D;
    CMat gamma(D, S);
    for (Eigen::Index s = 0; s < S; ++s) gamma.col(s) = eta.segment(s * D, D);
    return gamma;
}

inline SubspaceEstimate estimate_subspace(const PilotObservation& obs, const DpsBasis& basis, int S) {
    SubspaceEstimate est;
    est.phi = estimate_coefficients(obs, basis);
    est.gamma = to_delay_domain(est.phi, S);
    est.eta = stack_taps(est.gamma);
    return est;
}

struct Prediction {
    CVec taps;  // h[m], length S
    CVec freq;  // w[m], length N
};

/// h[m] = [gamma^1 .. gamma^S]^T f[m] and w[m] = D_{NxS} h[m].
inline Prediction predict(const CMat& gamma, const DpsBasis& basis, int m, int N) {
    if (gamma.rows() != basis.D) throw ConfigError("coefficient rows do not match the basis dimension");
    Prediction out;
    out.taps = gamma.transpose() * basis.f(m).cast<cplx>();
    out.freq = dft_columns(N, static_cast<int>(gamma.cols())) * out.taps;
    return out;
}

inline Prediction predict_stacked(const CVec& eta, const DpsBasis& basis, int m, int N) {
    return predict(unstack_taps(eta, basis.D), basis, m, N);
}

/// Per-subcarrier MMSE prediction
/// w[m,n] = r^(P)[m]^H (R^(P) + I/P)^-1 g'^n^(P) under the true temporal covariance.
inline CVec mmse_predict(const PilotObservation& obs, const DopplerSpectrum& spectrum, double P, int m) {
    if (!(P > 0.0)) throw ConfigError("P must be positive");
    const int n = obs.count();
    RMat R(n, n);
    RVec r(n);
    for (int a = 0; a < n; ++a) {
        r(a) = spectrum.autocorrelation(m - obs.positions[a]);
        for (int b = 0; b < n; ++b) R(a, b) = spectrum.autocorrelation(obs.positions[a] - obs.positions[b]);
    }
    if (!std::isinf(P)) R.diagonal().array() += 1.0 / P;
    const RVec weights = R.ldlt().solve(r);
    return obs.values.transpose() * weights.cast<cplx>();
}

struct MseTerms {
    double bias2 = 0.0;
    double variance = 0.0;
    double total() const { return bias2 + variance; }
};

/// Interpolation weights c_l = f[m]^T G^-1 f[l] over the pilot set.
inline RVec predictor_weights(const DpsBasis& basis, int m) {
    return basis.pilot_matrix() * basis.G_chol.solve(basis.f(m));
}

/// Per-subchannel prediction MSE split into squared bias under the true
/// spectrum and the variance f[m]^T G^-1 f[m] / snr.
inline MseTerms mse_analytic(int m, const DpsBasis& basis, double snr, const DopplerSpectrum& truth) {
    if (!(snr > 0.0)) throw ConfigError("snr must be positive");
    const RVec f = basis.f(m);
    const RVec c = predictor_weights(basis, m);
    std::vector<double> lag(basis.pilots.size());
    for (std::size_t i = 0; i < lag.size(); ++i) lag[i] = m - basis.pilots[i];
    MseTerms out;
    out.bias2 = truth.expectation(
        [&](double nu) {
            cplx acc(1.0, 0.0);
            for (std::size_t i = 0; i < lag.size(); ++i) acc -= c(static_cast<Eigen::Index>(i)) * std::polar(1.0, -2.0 * pi * nu * lag[i]);
            return std::norm(acc);
        },
        1e-10, 1e-16);
    out.variance = f.dot(basis.G_chol.solve(f)) / snr;
    return out;
}

}  // namespace iafb
