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

#include "iafb/types.hpp"

#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace iafb {

/// Shape of the Doppler power spectral density of a fading tap.
enum class DopplerShape {
    clarke,  ///< Jakes/Clarke: 1/(pi*sqrt(nu_D^2 - nu^2)), R[k] = J0(2 pi nu_D k)
    flat,    ///< flat on (-nu_D, nu_D), R[k] = sinc(2 nu_D k)
};

inline std::string to_string(DopplerShape s) { return s == DopplerShape::clarke ? "clarke" : "flat"; }

/// Gauss-Legendre nodes and weights on [-1, 1].
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
    std::vector<double> x(n), w(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
            }
            dp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    return {x, w};
}

/// Normalized (unit-power) Doppler spectrum of a wide-sense stationary tap.
class DopplerSpectrum {
public:
    DopplerSpectrum(DopplerShape shape, double nu_d) : shape_(shape), nu_d_(nu_d) {
        if (!(nu_d >= 0.0) || nu_d >= 0.5) throw ConfigError("normalized Doppler must lie in [0, 1/2)");
    }

    DopplerShape shape() const noexcept { return shape_; }
    double nu_d() const noexcept { return nu_d_; }

    /// Autocorrelation R[k] at integer lag k, R[0] = 1.
    double autocorrelation(double lag) const {
        if (nu_d_ == 0.0 || lag == 0.0) return 1.0;
        const double x = 2.0 * pi * nu_d_ * lag;
        if (shape_ == DopplerShape::clarke) return std::cyl_bessel_j(0.0, std::abs(x));
        return std::sin(x) / x;
    }

    /// E_S[g(nu)] = integral of g(nu) S(nu) d nu. The node count is doubled
    /// until two successive estimates agree to `rel_tol`; Clarke uses
    /// Gauss-Chebyshev nodes which absorb the band-edge singularity exactly.
    template <class F>
    double expectation(F&& g, double rel_tol = 1e-10, double abs_tol = 1e-15) const {
        if (nu_d_ == 0.0) return g(0.0);
        double previous = rule(g, 16);
        const int max_nodes = shape_ == DopplerShape::clarke ? (1 << 17) : 2048;
        for (int n = 32; n <= max_nodes; n *= 2) {
            const double current = rule(g, n);
            if (std::abs(current - previous) <= rel_tol * std::abs(current) + abs_tol) return current;
            previous = current;
        }
        throw std::runtime_error("Doppler spectrum quadrature did not converge");
    }

private:
    template <class F>
    double rule(F& g, int n) const {
        double acc = 0.0;
        if (shape_ == DopplerShape::clarke) {
            for (int i = 1; i <= n; ++i) acc += g(nu_d_ * std::cos((2.0 * i - 1.0) * pi / (2.0 * n)));
            return acc / n;
        }
        const auto [x, w] = gauss_legendre(n);
        for (int i = 0; i < n; ++i) acc += w[i] * g(nu_d_ * x[i]);
        return 0.5 * acc;
    }

    DopplerShape shape_;
    double nu_d_;
};

}  // namespace iafb
