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

// Discrete prolate spheroidal (Slepian) sequences: the eigenvectors of the
// flat-spectrum covariance over a pilot window of M samples, their
// minimum-energy band-limited extension over the prediction horizon, and
// the subspace-dimension rule for unquantized prediction.

#pragma once

#include "iafb/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

namespace iafb {

/// Covariance of a flat Doppler spectrum on (-nu_D, nu_D) at integer lag k,
/// normalized to unit power: sin(2 pi k nu_D) / (pi k 2 nu_D).
inline double flat_autocorrelation(double lag, double nu_d) {
    if (lag == 0.0) return 1.0;
    return std::sin(2.0 * pi * lag * nu_d) / (pi * lag * 2.0 * nu_d);
}

/// M x M Toeplitz covariance [R]_{l,m} = R_flat[l - m].
inline RMat flat_covariance(int M, double nu_d) {
    if (M < 1) throw ConfigError("window length must be positive");
    if (!(nu_d > 0.0) || nu_d >= 0.5)
        throw ConfigError("flat covariance needs 0 < nu_D < 1/2 (nu_D = 0 is the constant channel)");
    RMat R(M, M);
    for (int l = 0; l < M; ++l)
        for (int m = 0; m < M; ++m) R(l, m) = flat_autocorrelation(l - m, nu_d);
    return R;
}

/// Eigenvalues below this are treated as numerically zero when extending.
constexpr double min_dps_concentration = 1e-12;
/// Largest condition number accepted for the pilot Gram matrix.
constexpr double max_gram_condition = 1e12;

/// Slepian basis over the window {1..M}, extended over {1..horizon}, with
/// the D-dimensional evaluation vectors f[m] and pilot Gram matrix G.
struct DpsBasis {
    int window = 0;
    double band = 0.0;
    int horizon = 0;
    int D = 0;
    RMat U;                 // window x P, orthonormal columns ordered by eigenvalue
    RVec eigenvalues;       // of the normalized covariance R_flat, descending
    RVec kappa;             // energy concentrations, 2 nu_D * eigenvalue
    RMat U_ext;             // horizon x P, extended sequences u_p[m]
    std::vector<int> pilots;
    RMat G;                 // D x D Gram matrix over the pilot set
    Eigen::LLT<RMat> G_chol;
    RMat estimator;         // D x |pilots|, G^-1 U^(P)T

    /// f[m] = [u_0[m], ..., u_{D-1}[m]]^T for 1 <= m <= horizon.
    RVec f(int m) const {
        if (m < 1 || m > horizon) throw ConfigError("time index outside the modeled horizon");
        return U_ext.row(m - 1).head(D).transpose();
    }

    /// U^(P): rows of the active basis at the pilot positions.
    RMat pilot_matrix() const {
        RMat Up(static_cast<Eigen::Index>(pilots.size()), D);
        for (std::size_t i = 0; i < pilots.size(); ++i) Up.row(static_cast<Eigen::Index>(i)) = U_ext.row(pilots[i] - 1).head(D);
        return Up;
    }

    RMat G_inverse() const { return G_chol.solve(RMat::Identity(D, D)); }

    int available() const { return static_cast<int>(U.cols()); }
};

namespace detail {

struct SlepianEigen {
    RMat U;
    RVec eigenvalues;
};

inline SlepianEigen slepian_eigen(int M, double nu_d) {
    if (nu_d == 0.0) return {RMat::Constant(M, 1, 1.0 / std::sqrt(static_cast<double>(M))), RVec::Constant(1, M)};
    Eigen::SelfAdjointEigenSolver<RMat> eig(flat_covariance(M, nu_d));
    SlepianEigen out{RMat(M, M), RVec(M)};
    // Eigen returns ascending order
    for (int p = 0; p < M; ++p) {
        out.eigenvalues(p) = eig.eigenvalues()(M - 1 - p);
        RVec u = eig.eigenvectors().col(M - 1 - p);
        int first = 0;
        while (first < M - 1 && std::abs(u(first)) < 1e-13) ++first;
        if (u(first) < 0.0) u = -u;
        out.U.col(p) = u;
    }
    return out;
}

inline RVec concentrations(const RVec& eigenvalues, double nu_d) {
    if (nu_d == 0.0) return RVec::Ones(eigenvalues.size());
    RVec kappa(eigenvalues.size());
    for (Eigen::Index p = 0; p < kappa.size(); ++p)
        kappa(p) = std::clamp(2.0 * nu_d * eigenvalues(p), std::numeric_limits<double>::min(), 1.0);
    return kappa;
}

}  // namespace detail

/// Builds the basis for window M, band nu_D, horizon >= M, pilot set
/// `pilots` (1-based, inside the window) and active dimension D.
inline DpsBasis compute_basis(int M, double nu_d, int horizon, std::span<const int> pilots, int D) {
    if (horizon < M) throw ConfigError("horizon shorter than the pilot window");
    if (!(nu_d >= 0.0) || nu_d >= 0.5) throw ConfigError("nu_D must lie in [0, 1/2)");
    if (pilots.empty()) throw ConfigError("empty pilot set");
    for (int m : pilots)
        if (m < 1 || m > M) throw ConfigError("pilot position outside the window");
    if (D < 1 || D > static_cast<int>(pilots.size()))
        throw DimensionRejected("subspace dimension must lie in 1..|pilot set|");

    DpsBasis b;
    b.window = M;
    b.band = nu_d;
    b.horizon = horizon;
    b.D = D;
    b.pilots.assign(pilots.begin(), pilots.end());

    auto eig = detail::slepian_eigen(M, nu_d);
    b.U = std::move(eig.U);
    b.eigenvalues = std::move(eig.eigenvalues);
    b.kappa = detail::concentrations(b.eigenvalues, nu_d);
    if (D > b.available()) throw DimensionRejected("a constant channel supports a single basis function");
    for (int p = 0; p < D; ++p)
        if (b.kappa(p) < min_dps_concentration)
            throw DimensionRejected("DPS eigenvalue too small for a stable extension");

    const Eigen::Index P = b.U.cols();
    b.U_ext.resize(horizon, P);
    b.U_ext.topRows(M) = b.U;
    if (horizon > M) {
        if (nu_d == 0.0) {
            b.U_ext.bottomRows(horizon - M).setConstant(1.0 / std::sqrt(static_cast<double>(M)));
        } else {
            // u_p[m] = (1/lambda_p) sum_l R_flat[m - l] u_p[l]
            RMat K(horizon - M, M);
            for (int m = M; m < horizon; ++m)
                for (int l = 0; l < M; ++l) K(m - M, l) = flat_autocorrelation(m - l, nu_d);
            RVec inv(P);
            for (Eigen::Index p = 0; p < P; ++p)
                inv(p) = b.eigenvalues(p) > 0.0 ? 1.0 / b.eigenvalues(p) : 0.0;
            b.U_ext.bottomRows(horizon - M) = K * b.U * inv.asDiagonal();
        }
    }

    const RMat Up = b.pilot_matrix();
    b.G = Up.transpose() * Up;
    Eigen::SelfAdjointEigenSolver<RMat> geig(b.G, Eigen::EigenvaluesOnly);
    const double gmin = geig.eigenvalues()(0);
    const double gmax = geig.eigenvalues()(D - 1);
    if (!(gmin > 0.0) || gmax / gmin > max_gram_condition)
        throw DimensionRejected("pilot Gram matrix is ill-conditioned for the requested dimension");
    b.G_chol.compute(b.G);
    if (b.G_chol.info() != Eigen::Success) throw DimensionRejected("pilot Gram matrix is not positive definite");
    b.estimator = b.G_chol.solve(Up.transpose());
    return b;
}

inline const RVec& energy_concentration(const DpsBasis& basis) { return basis.kappa; }

/// Concentrations for window M and band nu_D without building a basis.
inline RVec dps_concentrations(int M, double nu_d) {
    const auto eig = detail::slepian_eigen(M, nu_d);
    return detail::concentrations(eig.eigenvalues, nu_d);
}

/// Subspace dimension minimizing the unquantized prediction MSE:
/// argmin_D (1/(2 nu_D M)) sum_{p>=D} kappa_p + D/(M P), ties to smaller D.
inline int optimal_dimension_unquantized(int M, double nu_d, double P) {
    if (!(P > 0.0)) throw ConfigError("P must be positive");
    if (nu_d == 0.0) return 1;
    const RVec kappa = dps_concentrations(M, nu_d);
    int best = 1;
    double best_value = std::numeric_limits<double>::infinity();
    for (int D = 1; D <= M; ++D) {
        const double tail = kappa.tail(M - D).sum();
        const double value = tail / (2.0 * nu_d * M) + D / (M * P);
        if (value < best_value) {
            best_value = value;
            best = D;
        }
    }
    return best;
}

}  // namespace iafb
