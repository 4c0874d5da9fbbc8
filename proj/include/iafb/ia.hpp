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

// Closed-form interference alignment for the three-user SISO interference
// channel over N = 2n + 1 symbol extensions, zero-forcing decoders, the
// precoder subspace rotation search, and evaluation of leakage and sum rate
// on the true channel.

#pragma once

#include "iafb/types.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace iafb {

/// Frequency responses of all K^2 links at one time index; (k, l) is the
/// link from transmitter l to receiver k. Each entry holds the N diagonal
/// entries of W_{k,l}.
class ChannelSet {
public:
    ChannelSet() = default;
    ChannelSet(int K, int N) : K_(K), N_(N), links_(static_cast<std::size_t>(K * K), CVec::Zero(N)) {
        if (K < 1 || N < 1) throw ConfigError("channel set needs K >= 1 and N >= 1");
    }

    int K() const noexcept { return K_; }
    int N() const noexcept { return N_; }

    CVec& operator()(int k, int l) { return links_[index(k, l)]; }
    const CVec& operator()(int k, int l) const { return links_[index(k, l)]; }

private:
    std::size_t index(int k, int l) const {
        if (k < 0 || l < 0 || k >= K_ || l >= K_) throw ConfigError("link index out of range");
        return static_cast<std::size_t>(k * K_ + l);
    }

    int K_ = 0;
    int N_ = 0;
    std::vector<CVec> links_;
};

/// Precoders and decoders of one channel use; column i of V[k] / U[k] is
/// stream i of user k (0-based users).
struct IaSolution {
    std::vector<int> d;
    std::vector<CMat> V;
    std::vector<CMat> U;

    int users() const { return static_cast<int>(d.size()); }
    int total_streams() const {
        int t = 0;
        for (int x : d) t += x;
        return t;
    }
};

/// Direct gains below this mark a non-generic realization.
constexpr double min_direct_gain = 1e-6;

/// d = (n+1, n, n) for K = 3 and N = 2n + 1.
inline std::vector<int> stream_allocation(int K, int N) {
    if (K != 3) throw ConfigError("closed-form alignment is implemented for K = 3");
    if (N < 3 || N % 2 == 0) throw ConfigError("closed-form alignment needs odd N >= 3");
    const int n = (N - 1) / 2;
    return {n + 1, n, n};
}

namespace detail {

inline void normalize_columns(CMat& A) {
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
        const double nrm = A.col(j).norm();
        if (!(nrm > 0.0) || !std::isfinite(nrm)) throw TrialRejected("degenerate precoder column");
        A.col(j) /= nrm;
    }
}

inline void require_full_rank(const CMat& A) {
    Eigen::JacobiSVD<CMat> svd(A);
    const RVec sv = svd.singularValues();
    if (!(sv(sv.size() - 1) > 1e-10 * sv(0))) throw TrialRejected("rank-deficient precoder");
}

/// Unitary d x d matrix drawn from the Haar measure.
inline CMat haar_unitary(int d, Rng& rng) {
    CMat Z(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) Z(i, j) = complex_normal(rng);
    Eigen::HouseholderQR<CMat> qr(Z);
    CMat Q = qr.householderQ() * CMat::Identity(d, d);
    const CMat R = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < d; ++j) {
        const double a = std::abs(R(j, j));
        if (a > 0.0) Q.col(j) *= R(j, j) / a;
    }
    return Q;
}

/// Receive-side geometry of user k: B spans the complement of the
/// interference, A0 = B^H W_kk V_k.
struct ReceiverGeometry {
    CMat B;
    CMat A0;
};

inline ReceiverGeometry receiver_geometry(const ChannelSet& H, const std::vector<CMat>& V, int k) {
    const int N = H.N();
    const int K = H.K();
    Eigen::Index cols = 0;
    for (int l = 0; l < K; ++l)
        if (l != k) cols += V[l].cols();
    ReceiverGeometry g;
    if (cols == 0) {
        g.B = CMat::Identity(N, N);
    } else {
        CMat J(N, cols);
        Eigen::Index c = 0;
        for (int l = 0; l < K; ++l) {
            if (l == k) continue;
            J.middleCols(c, V[l].cols()) = H(k, l).asDiagonal() * V[l];
            c += V[l].cols();
        }
        Eigen::JacobiSVD<CMat> svd(J, Eigen::ComputeFullU);
        const RVec sv = svd.singularValues();
        int rank = 0;
        for (Eigen::Index i = 0; i < sv.size(); ++i)
            if (sv(i) > 1e-8 * sv(0)) ++rank;
        rank = std::min<int>(rank, N - static_cast<int>(V[k].cols()));
        g.B = svd.matrixU().rightCols(N - rank);
    }
    g.A0 = g.B.adjoint() * H(k, k).asDiagonal() * V[k];
    return g;
}

/// (A^H A)^-1, rejecting streams that cannot be separated from interference.
inline CMat dual_gram(const CMat& A) {
    if (A.rows() < A.cols()) throw TrialRejected("interference occupies the signal space");
    const CMat gram = A.adjoint() * A;
    Eigen::LLT<CMat> llt(gram);
    if (llt.info() != Eigen::Success) throw TrialRejected("desired streams are not separable");
    return llt.solve(CMat::Identity(A.cols(), A.cols()));
}

}  // namespace detail

/// Closed-form precoders: T = W13 W23^-1 W21 W31^-1 W32 W12^-1, w = 1,
/// V1 = [w, Tw, ..., T^n w], V2 = W32^-1 W31 [Tw, ..., T^n w],
/// V3 = W23^-1 W21 [w, ..., T^(n-1) w], columns normalized.
inline std::vector<CMat> closed_form_precoders(const ChannelSet& H) {
    const int N = H.N();
    const auto d = stream_allocation(H.K(), N);
    const int n = d[1];
    for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l)
            for (int i = 0; i < N; ++i)
                if (!(std::abs(H(k, l)(i)) > 0.0)) throw TrialRejected("zero channel coefficient");
    const CVec t = (H(0, 2).array() * H(1, 0).array() * H(2, 1).array()) /
                   (H(1, 2).array() * H(2, 0).array() * H(0, 1).array());
    CMat powers(N, n + 1);
    powers.col(0).setOnes();
    for (int i = 1; i <= n; ++i) powers.col(i) = powers.col(i - 1).cwiseProduct(t);

    std::vector<CMat> V(3);
    V[0] = powers;
    V[1] = (H(2, 0).array() / H(2, 1).array()).matrix().asDiagonal() * powers.rightCols(n);
    V[2] = (H(1, 0).array() / H(1, 2).array()).matrix().asDiagonal() * powers.leftCols(n);
    for (auto& v : V) {
        detail::normalize_columns(v);
        detail::require_full_rank(v);
    }
    return V;
}

/// Decoders u_k^i orthogonal to all interference and to the other streams
/// of user k, taken as the normalized projection of W_kk v_k^i onto that
/// null space with u^H W_kk v real positive.
inline std::vector<CMat> zero_forcing_decoders(const std::vector<CMat>& V, const ChannelSet& H) {
    if (static_cast<int>(V.size()) != H.K()) throw ConfigError("one precoder per user is required");
    std::vector<CMat> U(V.size());
    for (int k = 0; k < H.K(); ++k) {
        const auto g = detail::receiver_geometry(H, V, k);
        const CMat C = g.A0 * detail::dual_gram(g.A0);
        U[k] = g.B * C;
        for (Eigen::Index i = 0; i < U[k].cols(); ++i) {
            U[k].col(i).normalize();
            const cplx gain = U[k].col(i).dot(H(k, k).cwiseProduct(V[k].col(i)));
            if (!(std::abs(gain) >= min_direct_gain)) throw TrialRejected("vanishing direct gain");
            U[k].col(i) *= gain / std::abs(gain);
        }
    }
    return U;
}

/// Orthonormalizes each precoder within its span, then keeps, per user,
/// the best of the identity, the eigenbasis of (A0^H A0)^-1 (optimal as
/// P grows) and `rotations` Haar-random d_k x d_k rotations under sum_i log2(1 + (NP/d_k) |u^H W_kk v|^2). Interference
/// spans do not depend on the rotations, so users are optimized separately.
inline std::vector<CMat> optimize_precoder_subspace(std::vector<CMat> V, const ChannelSet& H, double P, int rotations,
                                                    Rng& rng) {
    if (rotations < 0) throw ConfigError("rotation count must be non-negative");
    for (auto& v : V) {
        Eigen::HouseholderQR<CMat> qr(v);
        v = qr.householderQ() * CMat::Identity(v.rows(), v.cols());
    }
    if (rotations == 0) return V;
    const double N = H.N();
    for (int k = 0; k < H.K(); ++k) {
        const int d = static_cast<int>(V[k].cols());
        const auto g = detail::receiver_geometry(H, V, k);
        const CMat dual = detail::dual_gram(g.A0);
        const double snr = N * P / d;
        auto score = [&](const CMat& Q) {
            double s = 0.0;
            for (int i = 0; i < d; ++i) {
                const double inv_gain = std::real(Q.col(i).dot(dual * Q.col(i)));
                s += std::log2(1.0 + snr / inv_gain);
            }
            return s;
        };
        double best_score = score(CMat::Identity(d, d));
        CMat best = CMat::Identity(d, d);
        bool rotated = false;
        Eigen::SelfAdjointEigenSolver<CMat> eig(dual);
        if (eig.info() == Eigen::Success) {
            const double s = score(eig.eigenvectors());
            if (s > best_score) {
                best_score = s;
                best = eig.eigenvectors();
                rotated = true;
            }
        }
        for (int r = 0; r < rotations; ++r) {
            CMat Q = detail::haar_unitary(d, rng);
            const double s = score(Q);
            if (s > best_score) {
                best_score = s;
                best = std::move(Q);
                rotated = true;
            }
        }
        if (rotated) V[k] = V[k] * best;
    }
    return V;
}

/// Full design on channel knowledge H: closed form, subspace optimization,
/// zero-forcing decoders.
inline IaSolution design_ia(const ChannelSet& H, double P, int rotations, Rng& rng) {
    IaSolution sol;
    sol.d = stream_allocation(H.K(), H.N());
    sol.V = optimize_precoder_subspace(closed_form_precoders(H), H, P, rotations, rng);
    sol.U = zero_forcing_decoders(sol.V, H);
    return sol;
}

/// Largest |u_k^i^H W_kl v_l^j| over all interfering (l, j) != (k, i).
inline double alignment_residual(const IaSolution& sol, const ChannelSet& H) {
    double worst = 0.0;
    for (int k = 0; k < H.K(); ++k)
        for (int l = 0; l < H.K(); ++l) {
            const CMat X = sol.U[k].adjoint() * H(k, l).asDiagonal() * sol.V[l];
            for (Eigen::Index i = 0; i < X.rows(); ++i)
                for (Eigen::Index j = 0; j < X.cols(); ++j)
                    if (k != l || i != j) worst = std::max(worst, std::abs(X(i, j)));
        }
    return worst;
}

/// Smallest direct gain |u_k^i^H W_kk v_k^i|.
inline double min_direct_gain_of(const IaSolution& sol, const ChannelSet& H) {
    double g = std::numeric_limits<double>::infinity();
    for (int k = 0; k < H.K(); ++k)
        for (Eigen::Index i = 0; i < sol.V[k].cols(); ++i)
            g = std::min(g, std::abs(sol.U[k].col(i).dot(H(k, k).cwiseProduct(sol.V[k].col(i)))));
    return g;
}

/// Per-stream signal and leakage powers on the true channel.
struct LinkBudget {
    std::vector<RVec> signal;  // (NP/d_k) |u^H W_kk v|^2
    std::vector<RVec> I1;      // inter-stream leakage
    std::vector<RVec> I2;      // inter-user leakage
};

inline LinkBudget evaluate_links(const IaSolution& sol, const ChannelSet& W, double P) {
    const double N = W.N();
    LinkBudget out;
    for (int k = 0; k < W.K(); ++k) {
        const int dk = sol.d[k];
        RVec sig = RVec::Zero(dk), i1 = RVec::Zero(dk), i2 = RVec::Zero(dk);
        for (int l = 0; l < W.K(); ++l) {
            const CMat X = sol.U[k].adjoint() * W(k, l).asDiagonal() * sol.V[l];
            const double scale = N * P / sol.d[l];
            for (int i = 0; i < dk; ++i)
                for (Eigen::Index j = 0; j < X.cols(); ++j) {
                    const double p = scale * std::norm(X(i, j));
                    if (l == k && j == i) sig(i) = p;
                    else if (l == k) i1(i) += p;
                    else i2(i) += p;
                }
        }
        out.signal.push_back(sig);
        out.I1.push_back(i1);
        out.I2.push_back(i2);
    }
    return out;
}

/// R_sum = sum_{k,i} (1/N) log2(1 + signal / (I1 + I2 + 1)).
inline double sum_rate(const LinkBudget& b, int N) {
    double r = 0.0;
    for (std::size_t k = 0; k < b.signal.size(); ++k)
        for (Eigen::Index i = 0; i < b.signal[k].size(); ++i)
            r += std::log2(1.0 + b.signal[k](i) / (b.I1[k](i) + b.I2[k](i) + 1.0));
    return r / N;
}

inline double sum_rate(const IaSolution& sol, const ChannelSet& W, double P) {
    return sum_rate(evaluate_links(sol, W, P), W.N());
}

}  // namespace iafb
