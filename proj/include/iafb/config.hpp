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

#include "iafb/spectrum.hpp"
#include "iafb/types.hpp"

#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace iafb {

enum class QuantizerMode {
    explicit_rvq,  ///< search an explicit random codebook of 2^N_d isotropic codewords
    perturbation,  ///< sample the exact minimum-chordal-distance law of RVQ
};

inline std::string to_string(QuantizerMode q) {
    return q == QuantizerMode::explicit_rvq ? "explicit-rvq" : "perturbation";
}

/// Largest codebook that is ever materialized.
constexpr int max_explicit_bits = 20;

/// Full scenario description. Time indices are 1-based: pilots occupy
/// {1..M}, the feedback delay {M+1..M+T_D} and the payload
/// {M+T_D+1..M+T_D+T}.
struct SimConfig {
    int K = 3;           // users
    int N = 5;           // subcarriers (symbol extensions)
    int S = 3;           // delay taps
    int M = 15;          // pilot sequence length (OFDM symbols)
    int T = 45;          // payload length
    int T_D = 0;         // feedback delay
    double nu_D = 0.004; // normalized Doppler frequency
    double P = 1000.0;   // transmit power per subcarrier (= SNR)
    int N_d = 15;        // feedback bits per link
    std::vector<double> pdp;           // empty: flat N/S per tap
    std::optional<int> dimension;      // nullopt: adaptive subspace dimension switching
    QuantizerMode quantizer = QuantizerMode::perturbation;
    DopplerShape spectrum = DopplerShape::clarke;  // true fading spectrum
    std::uint64_t seed = 1;
    int trials = 100;
    int rotations = 50;  // precoder subspace optimization candidates

    int pilots_per_user() const { return M / K; }
    int horizon() const { return M + T_D + T; }
    int payload_first() const { return M + T_D + 1; }
    int payload_last() const { return M + T_D + T; }
    double snr_db() const { return linear_to_db(P); }

    std::vector<double> power_delay_profile() const {
        if (!pdp.empty()) return pdp;
        return std::vector<double>(static_cast<std::size_t>(S), static_cast<double>(N) / S);
    }

    void validate() const {
        if (K < 1) throw ConfigError("K must be >= 1");
        if (N < 1 || S < 1) throw ConfigError("N and S must be positive");
        if (S > N) throw ConfigError("S must not exceed N");
        if (M < 1 || M % K != 0) throw ConfigError("M must be a positive multiple of K");
        if (T < 1 || T_D < 0) throw ConfigError("T must be positive and T_D non-negative");
        if (!(nu_D >= 0.0) || nu_D >= 0.5) throw ConfigError("nu_D must lie in [0, 1/2)");
        if (!(P >= 0.0)) throw ConfigError("P must be non-negative");
        if (N_d < 0) throw ConfigError("N_d must be non-negative");
        if (trials < 1) throw ConfigError("trials must be positive");
        if (rotations < 0) throw ConfigError("rotations must be non-negative");
        if (dimension && (*dimension < 1 || *dimension > pilots_per_user()))
            throw ConfigError("fixed dimension D must satisfy 1 <= D <= M/K");
        if (!pdp.empty()) {
            if (static_cast<int>(pdp.size()) != S) throw ConfigError("pdp must have S entries");
            for (double p : pdp)
                if (!(p >= 0.0)) throw ConfigError("pdp entries must be non-negative");
            const double total = std::accumulate(pdp.begin(), pdp.end(), 0.0);
            if (std::abs(total - N) > 1e-9 * N) throw ConfigError("pdp must sum to N");
        }
        if (quantizer == QuantizerMode::explicit_rvq && N_d > max_explicit_bits)
            throw ConfigError("explicit codebooks are limited to N_d <= 20; use the perturbation quantizer");
    }
};

}  // namespace iafb
