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

#include "iafb/ia.hpp"
#include "iafb/types.hpp"

#include <cmath>
#include <complex>

namespace iafb::testing {

/// K x K links of N i.i.d. unit-power complex Gaussian coefficients.
inline ChannelSet random_channels(int K, int N, Rng& rng) {
    ChannelSet H(K, N);
    for (int k = 0; k < K; ++k)
        for (int l = 0; l < K; ++l) H(k, l) = complex_normal_vector(N, rng);
    return H;
}

/// Frobenius distance between the orthogonal projectors onto span(A) and span(B).
inline double projector_distance(const CMat& A, const CMat& B) {
    auto projector = [](const CMat& X) {
        Eigen::HouseholderQR<CMat> qr(X);
        const CMat Q = qr.householderQ() * CMat::Identity(X.rows(), X.cols());
        return CMat(Q * Q.adjoint());
    };
    return (projector(A) - projector(B)).norm();
}

/// Direct-summation unitary DFT entry, independent of dft_matrix.
inline cplx dft_entry(int i, int j, int N) {
    return std::exp(cplx(0.0, -2.0 * pi * i * j / N)) / std::sqrt(static_cast<double>(N));
}

}  // namespace iafb::testing
