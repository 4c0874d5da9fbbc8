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

// Non-predictive comparison strategy: a static channel impulse response
// averaged over the pilot slots, quantized as an S-dimensional direction and
// used for a single alignment design held over the whole payload.

#pragma once

#include "iafb/channel.hpp"
#include "iafb/dps.hpp"
#include "iafb/feedback.hpp"
#include "iafb/ia.hpp"
#include "iafb/predictor.hpp"
#include "iafb/types.hpp"

#include <cmath>
#include <vector>

namespace iafb {

struct CirEstimate {
    CVec h_avg;  // time-averaged impulse response, length S
};

/// Reduced-rank estimate evaluated at every pilot slot, truncated to the
/// first S delay taps and averaged over the pilot slots.
inline CirEstimate estimate_static_cir(const PilotObservation& obs, const DpsBasis& basis, int S) {
    const CMat gamma = to_delay_domain(estimate_coefficients(obs, basis), S);
    CirEstimate cir;
    cir.h_avg = CVec::Zero(S);
    for (int m : basis.pilots) cir.h_avg += gamma.transpose() * basis.f(m).cast<cplx>();
    cir.h_avg /= static_cast<double>(basis.pilots.size());
    return cir;
}

/// Impulse response rebuilt at the transmitter from a quantized direction,
/// scaled to the average norm sqrt(N) of an N-power channel.
inline CVec reconstruct_cir(const QuantizedDirection& q, int N) { return q.direction * std::sqrt(static_cast<double>(N)); }

/// Sum rate of one fixed alignment design over a sequence of true channels.
inline std::vector<double> baseline_rate(const IaSolution& sol, const std::vector<ChannelSet>& truth, double P) {
    std::vector<double> rate;
    rate.reserve(truth.size());
    for (const auto& W : truth) rate.push_back(sum_rate(sol, W, P));
    return rate;
}

}  // namespace iafb
