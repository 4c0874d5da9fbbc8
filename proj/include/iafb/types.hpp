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

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace iafb {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

/// Random engine used by every stochastic operation. Streams are derived
/// explicitly (see stream_seed) so results never depend on call order across
/// trials or threads.
using Rng = std::mt19937_64;

constexpr double pi = std::numbers::pi;

/// Invalid configuration or argument outside an operation's domain.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Requested subspace dimension cannot be supported by the pilot set
/// (ill-conditioned Gram matrix or vanishing DPS eigenvalue).
class DimensionRejected : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Non-generic channel realization for which the closed-form IA solution
/// does not exist. Counted by the harness, never silently dropped.
class TrialRejected : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// splitmix64 finalizer
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed of an independent stream identified by (seed, a, b, c).
constexpr std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                                    std::uint64_t c = 0) noexcept {
    return mix64(mix64(mix64(mix64(seed) ^ a) ^ (b * 0x2545f4914f6cdd1dULL)) ^
                 (c * 0x9fb21c651e98df25ULL));
}

/// Uniform draw on (0, 1]; 53-bit resolution, platform independent.
inline double uniform_open0(Rng& rng) {
    return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
}

/// Uniform draw on [0, 1).
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Standard circular complex Gaussian, E|z|^2 = 1 (Box-Muller in polar form).
inline cplx complex_normal(Rng& rng) {
    const double r = std::sqrt(-std::log(uniform_open0(rng)));
    const double theta = 2.0 * pi * uniform01(rng);
    return {r * std::cos(theta), r * std::sin(theta)};
}

inline CVec complex_normal_vector(Eigen::Index n, Rng& rng) {
    CVec z(n);
    for (Eigen::Index i = 0; i < n; ++i) z(i) = complex_normal(rng);
    return z;
}

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

}  // namespace iafb
