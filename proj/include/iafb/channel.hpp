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

#pragma once

#include "iafb/config.hpp"
#include "iafb/spectrum.hpp"
#include "iafb/types.hpp"

#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace iafb {

/// Pilot slots of transmitter k (1-based): {k, k+K, ..., k+(M_p-1)K}.
inline std::vector<int> pilot_positions(int k, int K, int pilots_per_user) {
    if (K < 1 || k < 1 || k > K) throw ConfigError("transmitter index out of range");
    if (pilots_per_user < 1) throw ConfigError("at least one pilot per transmitter is required");
    std::vector<int> positions(static_cast<std::size_t>(pilots_per_user));
    for (int i = 0; i < pilots_per_user; ++i) positions[i] = k + i * K;
    return positions;
}

inline std::vector<int> pilot_positions(int k, const SimConfig& cfg) {
    return pilot_positions(k, cfg.K, cfg.pilots_per_user());
}

/// Unitary DFT matrix, [D_N]_{i,j} = exp(-j 2 pi (i-1)(j-1) / N) / sqrt(N).
inline CMat dft_matrix(int N) {
    CMat D(N, N);
    const double scale = 1.0 / std::sqrt(static_cast<double>(N));
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            // reduce the exponent modulo N so large indices keep full precision
            const double angle = -2.0 * pi * static_cast<double>((i * j) % N) / N;
            D(i, j) = std::polar(scale, angle);
        }
    return D;
}

/// First S columns of the N-point unitary DFT.
inline CMat dft_columns(int N, int S) {
    if (S > N) throw ConfigError("more delay taps than subcarriers");
    return dft_matrix(N).leftCols(S);
}

/// w = D_{NxS} h.
inline CVec to_frequency_response(const CVec& taps, int N) {
    if (taps.size() > N) throw ConfigError("more delay taps than subcarriers");
    return dft_columns(N, static_cast<int>(taps.size())) * taps;
}

/// Draws unit-power stationary sequences with exact autocorrelation over a
/// finite horizon via symmetric factorization of the Toeplitz covariance.
class FadingSynthesizer {
public:
    FadingSynthesizer(int length, const DopplerSpectrum& spectrum) : length_(length), constant_(spectrum.nu_d() == 0.0) {
        if (length < 1) throw ConfigError("horizon must be positive");
        if (constant_) return;
        RMat R(length, length);
        for (int a = 0; a < length; ++a)
            for (int b = 0; b < length; ++b) R(a, b) = spectrum.autocorrelation(a - b);
        Eigen::SelfAdjointEigenSolver<RMat> eig(R);
        RVec lambda = eig.eigenvalues();
        for (Eigen::Index i = 0; i < lambda.size(); ++i) lambda(i) = std::sqrt(std::max(lambda(i), 0.0));
        factor_ = eig.eigenvectors() * lambda.asDiagonal();
    }

    int length() const noexcept { return length_; }

    /// Returns A with A A^T equal to the covariance (empty for a constant channel).
    const RMat& factor() const noexcept { return factor_; }

    CVec draw(Rng& rng) const {
        if (constant_) return CVec::Constant(length_, complex_normal(rng));
        const CVec z = complex_normal_vector(length_, rng);
        return factor_.cast<cplx>() * z;
    }

private:
    int length_;
    bool constant_;
    RMat factor_;
};

/// Time-variant impulse and frequency response of one link over the horizon.
/// Row r holds time index m = r + 1.
struct LinkChannel {
    CMat taps;  // horizon x S, h[m, s]
    CMat freq;  // horizon x N, w[m]^T

    int horizon() const { return static_cast<int>(taps.rows()); }
    CVec frequency_at(int m) const { return freq.row(m - 1).transpose(); }
    CVec taps_at(int m) const { return taps.row(m - 1).transpose(); }
};

inline LinkChannel generate_link(int N, std::span<const double> pdp, const FadingSynthesizer& synth, Rng& rng) {
    const int S = static_cast<int>(pdp.size());
    if (S > N) throw ConfigError("more delay taps than subcarriers");
    LinkChannel link;
    link.taps.resize(synth.length(), S);
    for (int s = 0; s < S; ++s) link.taps.col(s) = std::sqrt(pdp[s]) * synth.draw(rng);
    link.freq = link.taps * dft_columns(N, S).transpose();
    return link;
}

inline LinkChannel generate_link(const SimConfig& cfg, Rng& rng) {
    const FadingSynthesizer synth(cfg.horizon(), DopplerSpectrum(cfg.spectrum, cfg.nu_D));
    const auto pdp = cfg.power_delay_profile();
    return generate_link(cfg.N, pdp, synth, rng);
}

/// Noisy least-squares channel observations at the pilot slots of one link.
struct PilotObservation {
    std::vector<int> positions;  // 1-based time indices
    CMat values;                 // |positions| x N, w'[m, n]

    int count() const { return static_cast<int>(positions.size()); }
};

/// w'[m,n] = w[m,n] + n'[m,n]/sqrt(P); P = +inf gives noiseless observations.
inline PilotObservation observe_pilots(const LinkChannel& link, std::span<const int> positions, double P, Rng& rng) {
    if (positions.empty()) throw ConfigError("empty pilot position set");
    if (!(P > 0.0)) throw ConfigError("pilot power must be positive");
    PilotObservation obs;
    obs.positions.assign(positions.begin(), positions.end());
    const Eigen::Index N = link.freq.cols();
    obs.values.resize(static_cast<Eigen::Index>(positions.size()), N);
    const double noise_scale = std::isinf(P) ? 0.0 : 1.0 / std::sqrt(P);
    for (std::size_t i = 0; i < positions.size(); ++i) {
        const int m = positions[i];
        if (m < 1 || m > link.horizon()) throw ConfigError("pilot position outside the channel horizon");
        obs.values.row(static_cast<Eigen::Index>(i)) = link.freq.row(m - 1);
        if (noise_scale > 0.0)
            for (Eigen::Index n = 0; n < N; ++n) obs.values(static_cast<Eigen::Index>(i), n) += noise_scale * complex_normal(rng);
    }
    return obs;
}

}  // namespace iafb
