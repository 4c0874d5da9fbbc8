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

// Grassmannian limited feedback of the stacked subspace vector: whitening
// with the assumed coefficient covariance, random vector quantization with
// an explicit codebook or with the exact minimum-distance law, and the
// codebook file format.

#pragma once

#include "iafb/config.hpp"
#include "iafb/dps.hpp"
#include "iafb/types.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <span>
#include <vector>

namespace iafb {

/// Assumed second-order statistics of the stacked coefficient vector.
struct CoefficientStatistics {
    int D = 0;
    int S = 0;
    std::vector<RMat> lambda_s;  // D x D per tap
    RMat R_eta;                  // DS x DS, block diagonal
    RMat Sigma;                  // lower-triangular block-diagonal factor, R_eta = Sigma Sigma^T
    bool regularized = false;

    int dim() const { return D * S; }
};

/// lambda^s = G^-1 U^(P)T (p^s R_flat^(P) + I/P) U^(P) G^-1, R_eta = blockdiag(lambda^s).
inline CoefficientStatistics coefficient_covariance(const DpsBasis& basis, std::span<const double> pdp, double P) {
    if (pdp.empty()) throw ConfigError("empty power delay profile");
    if (!(P > 0.0)) throw ConfigError("P must be positive");
    const int D = basis.D;
    const int S = static_cast<int>(pdp.size());
    const int n = static_cast<int>(basis.pilots.size());
    RMat Rp(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            Rp(a, b) = basis.band == 0.0 ? 1.0 : flat_autocorrelation(basis.pilots[a] - basis.pilots[b], basis.band);
    const RMat A = basis.G_chol.solve(basis.pilot_matrix().transpose());  // G^-1 U^(P)T

    CoefficientStatistics st;
    st.D = D;
    st.S = S;
    st.R_eta = RMat::Zero(D * S, D * S);
    st.Sigma = RMat::Zero(D * S, D * S);
    for (int s = 0; s < S; ++s) {
        RMat inner = pdp[s] * Rp;
        if (!std::isinf(P)) inner.diagonal().array() += 1.0 / P;
        RMat lambda = A * inner * A.transpose();
        lambda = 0.5 * (lambda + lambda.transpose());
        Eigen::LLT<RMat> llt(lambda);
        if (llt.info() != Eigen::Success) {
            lambda.diagonal().array() += 1e-12;
            llt.compute(lambda);
            st.regularized = true;
            std::cerr << "iafb: coefficient covariance regularized for tap " << s << '\n';
            if (llt.info() != Eigen::Success) throw ConfigError("coefficient covariance is not positive definite");
        }
        st.R_eta.block(s * D, s * D, D, D) = lambda;
        st.Sigma.block(s * D, s * D, D, D) = llt.matrixL();
        st.lambda_s.push_back(std::move(lambda));
    }
    return st;
}

/// eta_whitened = Sigma^-1 eta.
inline CVec whiten(const CVec& eta, const CoefficientStatistics& st) {
    if (eta.size() != st.dim()) throw ConfigError("vector length does not match the statistics");
    const CMat L = st.Sigma.cast<cplx>();
    return L.triangularView<Eigen::Lower>().solve(eta);
}

/// Sigma eta_hat.
inline CVec unwhiten(const CVec& eta_hat, const CoefficientStatistics& st) {
    if (eta_hat.size() != st.dim()) throw ConfigError("vector length does not match the statistics");
    return st.Sigma.cast<cplx>() * eta_hat;
}

/// Squared chordal distance 1 - |x^H y|^2 / (|x|^2 |y|^2).
inline double chordal_distance_sq(const CVec& x, const CVec& y) {
    const double nx = x.squaredNorm(), ny = y.squaredNorm();
    if (!(nx > 0.0) || !(ny > 0.0)) throw ConfigError("chordal distance of a zero vector");
    return std::max(0.0, 1.0 - std::norm(x.dot(y)) / (nx * ny));
}

/// Random vector quantization codebook of 2^N_d isotropic unit vectors.
class Codebook {
public:
    Codebook() = default;

    Codebook(int bits, CMat vectors) : bits_(bits), vectors_(std::move(vectors)) {
        if (bits < 0 || bits > max_explicit_bits) throw ConfigError("codebook bits must lie in 0..20");
        if (vectors_.rows() != (Eigen::Index{1} << bits)) throw ConfigError("codebook must hold 2^N_d vectors");
        if (vectors_.cols() < 1) throw ConfigError("codebook dimension must be positive");
    }

    static Codebook random(int bits, int dim, Rng& rng) {
        if (bits < 0 || bits > max_explicit_bits) throw ConfigError("codebook bits must lie in 0..20");
        if (dim < 1) throw ConfigError("codebook dimension must be positive");
        CMat v(Eigen::Index{1} << bits, dim);
        for (Eigen::Index i = 0; i < v.rows(); ++i) {
            for (Eigen::Index j = 0; j < dim; ++j) v(i, j) = complex_normal(rng);
            v.row(i).normalize();
        }
        return Codebook(bits, std::move(v));
    }

    int bits() const noexcept { return bits_; }
    int dim() const noexcept { return static_cast<int>(vectors_.cols()); }
    Eigen::Index size() const noexcept { return vectors_.rows(); }
    const CMat& vectors() const noexcept { return vectors_; }
    CVec codeword(Eigen::Index i) const { return vectors_.row(i).transpose(); }

    /// Little-endian file: "RVQ1", u32 N_d, u32 dim, u32 reserved, then
    /// 2^N_d x dim interleaved (re, im) float64 in row-major order.
    void save(const std::filesystem::path& path) const {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open codebook file for writing: " + path.string());
        out.write("RVQ1", 4);
        put_u32(out, static_cast<std::uint32_t>(bits_));
        put_u32(out, static_cast<std::uint32_t>(dim()));
        put_u32(out, 0);
        for (Eigen::Index i = 0; i < size(); ++i)
            for (Eigen::Index j = 0; j < vectors_.cols(); ++j) {
                put_f64(out, vectors_(i, j).real());
                put_f64(out, vectors_(i, j).imag());
            }
        if (!out) throw std::runtime_error("failed writing codebook file: " + path.string());
    }

    static Codebook load(const std::filesystem::path& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw std::runtime_error("cannot open codebook file: " + path.string());
        char magic[4];
        in.read(magic, 4);
        if (!in || std::memcmp(magic, "RVQ1", 4) != 0) throw ConfigError("not an RVQ1 codebook file");
        const std::uint32_t bits = get_u32(in);
        const std::uint32_t dim = get_u32(in);
        get_u32(in);
        if (!in || bits > static_cast<std::uint32_t>(max_explicit_bits) || dim == 0)
            throw ConfigError("corrupt codebook header");
        CMat v(Eigen::Index{1} << bits, static_cast<Eigen::Index>(dim));
        for (Eigen::Index i = 0; i < v.rows(); ++i)
            for (Eigen::Index j = 0; j < v.cols(); ++j) {
                const double re = get_f64(in);
                const double im = get_f64(in);
                v(i, j) = {re, im};
            }
        if (!in) throw ConfigError("truncated codebook file");
        return Codebook(static_cast<int>(bits), std::move(v));
    }

private:
    static void put_u32(std::ostream& out, std::uint32_t x) {
        std::array<char, 4> b;
        for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((x >> (8 * i)) & 0xffu);
        out.write(b.data(), 4);
    }
    static void put_f64(std::ostream& out, double x) {
        std::uint64_t u;
        std::memcpy(&u, &x, 8);
        std::array<char, 8> b;
        for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((u >> (8 * i)) & 0xffu);
        out.write(b.data(), 8);
    }
    static std::uint32_t get_u32(std::istream& in) {
        std::array<unsigned char, 4> b{};
        in.read(reinterpret_cast<char*>(b.data()), 4);
        std::uint32_t x = 0;
        for (int i = 0; i < 4; ++i) x |= static_cast<std::uint32_t>(b[i]) << (8 * i);
        return x;
    }
    static double get_f64(std::istream& in) {
        std::array<unsigned char, 8> b{};
        in.read(reinterpret_cast<char*>(b.data()), 8);
        std::uint64_t u = 0;
        for (int i = 0; i < 8; ++i) u |= static_cast<std::uint64_t>(b[i]) << (8 * i);
        double x;
        std::memcpy(&x, &u, 8);
        return x;
    }

    int bits_ = 0;
    CMat vectors_;
};

/// Quantized unit direction. index is -1 for the perturbation model.
struct QuantizedDirection {
    CVec direction;
    double distance_sq = 0.0;
    std::int64_t index = -1;
};

/// argmax_i |c_i^H x|, ties to the lowest index.
inline QuantizedDirection quantize_explicit(const CVec& x, const Codebook& codebook) {
    if (x.size() != codebook.dim()) throw ConfigError("codebook dimension mismatch");
    const double nx = x.squaredNorm();
    if (!(nx > 0.0)) throw ConfigError("cannot quantize a zero vector");
    const RVec gain = (codebook.vectors().conjugate() * x).cwiseAbs2();
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < gain.size(); ++i)
        if (gain(i) > gain(best)) best = i;
    QuantizedDirection q;
    q.index = best;
    q.direction = codebook.codeword(best);
    q.distance_sq = std::max(0.0, 1.0 - gain(best) / nx);
    return q;
}

/// CDF of the minimum squared chordal distance over 2^N_d isotropic
/// codewords in C^dim: 1 - (1 - x^(dim-1))^(2^N_d).
inline double rvq_distance_cdf(double x, int dim, double bits) {
    if (dim < 2) throw ConfigError("dimension must be at least 2");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double single = std::pow(x, dim - 1);
    return -std::expm1(std::exp2(bits) * std::log1p(-single));
}

/// Draws d^2 = (1 - (1-u)^(2^-N_d))^(1/(dim-1)).
inline double sample_rvq_distance_sq(int dim, double bits, Rng& rng) {
    if (dim < 2) return 0.0;
    const double u = uniform01(rng);
    const double inner = -std::expm1(std::exp2(-bits) * std::log1p(-u));
    return std::pow(inner, 1.0 / (dim - 1));
}

/// Exact RVQ error model: sqrt(1-d^2) v + d e with e uniform on the unit
/// sphere orthogonal to v = x/|x|.
inline QuantizedDirection quantize_perturbation(const CVec& x, double bits, Rng& rng) {
    const double nx = x.norm();
    if (!(nx > 0.0)) throw ConfigError("cannot quantize a zero vector");
    QuantizedDirection q;
    const CVec v = x / nx;
    if (x.size() < 2) {
        q.direction = v;
        return q;
    }
    q.distance_sq = sample_rvq_distance_sq(static_cast<int>(x.size()), bits, rng);
    CVec e;
    double ne = 0.0;
    do {
        e = complex_normal_vector(x.size(), rng);
        e -= v * v.dot(e);
        ne = e.norm();
    } while (!(ne > 1e-12));
    e /= ne;
    q.direction = std::sqrt(1.0 - q.distance_sq) * v + std::sqrt(q.distance_sq) * e;
    return q;
}

/// N_d = ceil((DS - 1) log2 P).
inline int required_bits(int DS, double P) {
    if (DS < 1) throw ConfigError("dimension must be positive");
    if (!(P > 1.0)) throw ConfigError("required_bits needs P > 1");
    return static_cast<int>(std::ceil((DS - 1) * std::log2(P) - 1e-12));
}

}  // namespace iafb
