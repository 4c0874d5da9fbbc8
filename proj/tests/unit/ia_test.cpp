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

#include "iafb/ia.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace iafb {
namespace {

using testing::projector_distance;
using testing::random_channels;

TEST(StreamAllocation, FiveExtensions) {
    EXPECT_EQ(stream_allocation(3, 5), (std::vector<int>{3, 2, 2}));
}

TEST(StreamAllocation, ThreeExtensions) {
    EXPECT_EQ(stream_allocation(3, 3), (std::vector<int>{2, 1, 1}));
}

TEST(StreamAllocation, RejectsUnsupportedShapes) {
    EXPECT_THROW(stream_allocation(2, 5), ConfigError);
    EXPECT_THROW(stream_allocation(3, 4), ConfigError);
}

TEST(ClosedForm, AlignsOnDesignChannel) {
    Rng rng(1);
    for (int N : {3, 5}) {
        for (int t = 0; t < 200; ++t) {
            const auto H = random_channels(3, N, rng);
            IaSolution sol;
            sol.d = stream_allocation(3, N);
            sol.V = closed_form_precoders(H);
            sol.U = zero_forcing_decoders(sol.V, H);
            EXPECT_LE(alignment_residual(sol, H), 1e-8);
            EXPECT_GE(min_direct_gain_of(sol, H), min_direct_gain);
            for (int k = 0; k < 3; ++k) {
                ASSERT_EQ(sol.V[k].cols(), sol.d[k]);
                for (int i = 0; i < sol.d[k]; ++i) {
                    EXPECT_NEAR(sol.V[k].col(i).norm(), 1.0, 1e-12);
                    EXPECT_NEAR(sol.U[k].col(i).norm(), 1.0, 1e-12);
                }
            }
        }
    }
}

TEST(ClosedForm, SevenExtensionsRarelyRejected) {
    Rng rng(21);
    int rejected = 0;
    const int n = 1000;
    for (int t = 0; t < n; ++t) {
        const auto H = random_channels(3, 7, rng);
        try {
            IaSolution sol{stream_allocation(3, 7), closed_form_precoders(H), {}};
            sol.U = zero_forcing_decoders(sol.V, H);
            EXPECT_LE(alignment_residual(sol, H), 1e-8);
            EXPECT_GE(min_direct_gain_of(sol, H), min_direct_gain);
        } catch (const TrialRejected&) {
            ++rejected;
        }
    }
    EXPECT_LT(rejected, n / 20);
}

TEST(ClosedForm, InterferenceRankAtEachReceiver) {
    Rng rng(2);
    for (int t = 0; t < 100; ++t) {
        for (int N : {3, 5}) {
            const auto H = random_channels(3, N, rng);
            const auto V = closed_form_precoders(H);
            const auto d = stream_allocation(3, N);
            for (int k = 0; k < 3; ++k) {
                CMat J(N, 0);
                for (int l = 0; l < 3; ++l) {
                    if (l == k) continue;
                    const CMat X = H(k, l).asDiagonal() * V[l];
                    CMat next(N, J.cols() + X.cols());
                    next << J, X;
                    J = next;
                }
                Eigen::JacobiSVD<CMat> svd(J);
                const RVec sv = svd.singularValues();
                int rank = 0;
                for (Eigen::Index i = 0; i < sv.size(); ++i)
                    if (sv(i) > 1e-9 * sv(0)) ++rank;
                EXPECT_LE(rank, N - d[k]);
            }
        }
    }
}

TEST(ClosedForm, RejectsZeroChannelEntry) {
    Rng rng(3);
    auto H = random_channels(3, 5, rng);
    H(1, 2)(3) = 0.0;
    EXPECT_THROW(closed_form_precoders(H), TrialRejected);
}

TEST(ZeroForcing, SingleUserIsMatchedFilter) {
    Rng rng(4);
    const auto H = random_channels(1, 4, rng);
    std::vector<CMat> V{complex_normal_vector(4, rng).normalized()};
    const auto U = zero_forcing_decoders(V, H);
    const CVec mf = H(0, 0).cwiseProduct(V[0].col(0)).normalized();
    EXPECT_LT(projector_distance(U[0], mf), 1e-12);
    EXPECT_GT(std::real(U[0].col(0).dot(H(0, 0).cwiseProduct(V[0].col(0)))), 0.0);
}

TEST(ZeroForcing, DecoderMaximizesDirectGainInFeasibleSet) {
    Rng rng(5);
    const auto H = random_channels(3, 5, rng);
    const auto V = closed_form_precoders(H);
    const auto U = zero_forcing_decoders(V, H);
    IaSolution sol{stream_allocation(3, 5), V, U};
    // any other unit vector orthogonal to the same constraints has a smaller gain
    for (int k = 0; k < 3; ++k) {
        for (int i = 0; i < sol.d[k]; ++i) {
            const double gain = std::abs(U[k].col(i).dot(H(k, k).cwiseProduct(V[k].col(i))));
            CMat cons(5, 0);
            for (int l = 0; l < 3; ++l)
                for (int j = 0; j < sol.d[l]; ++j) {
                    if (l == k && j == i) continue;
                    CMat next(5, cons.cols() + 1);
                    next << cons, H(k, l).cwiseProduct(V[l].col(j));
                    cons = next;
                }
            Eigen::JacobiSVD<CMat> svd(cons, Eigen::ComputeFullU);
            const CVec null = svd.matrixU().col(4);
            const double null_gain = std::abs(null.dot(H(k, k).cwiseProduct(V[k].col(i))));
            EXPECT_NEAR(gain, null_gain, 1e-8);
        }
    }
}

TEST(Leakage, PerfectChannelKnowledgeLeaksNothing) {
    Rng rng(6);
    const double P = 1e4;
    for (int t = 0; t < 100; ++t) {
        const auto H = random_channels(3, 5, rng);
        const auto sol = design_ia(H, P, 20, rng);
        const auto b = evaluate_links(sol, H, P);
        for (int k = 0; k < 3; ++k)
            for (int i = 0; i < sol.d[k]; ++i) EXPECT_LE(b.I1[k](i) + b.I2[k](i), 1e-9 * P);
    }
}

TEST(Optimization, NoRotationsKeepsSpans) {
    Rng rng(7);
    const auto H = random_channels(3, 5, rng);
    const auto V0 = closed_form_precoders(H);
    const auto V1 = optimize_precoder_subspace(V0, H, 100.0, 0, rng);
    for (int k = 0; k < 3; ++k) {
        EXPECT_LE(projector_distance(V0[k], V1[k]), 1e-10);
        EXPECT_LE((V1[k].adjoint() * V1[k] - CMat::Identity(V1[k].cols(), V1[k].cols())).norm(), 1e-12);
    }
}

double design_objective(const IaSolution& sol, const ChannelSet& H, double P) {
    double s = 0.0;
    for (int k = 0; k < 3; ++k)
        for (int i = 0; i < sol.d[k]; ++i)
            s += std::log2(1.0 + H.N() * P / sol.d[k] *
                                     std::norm(sol.U[k].col(i).dot(H(k, k).cwiseProduct(sol.V[k].col(i)))));
    return s;
}

TEST(Optimization, ObjectiveNotBelowOrthonormalizedStart) {
    Rng rng(8);
    const double P = 100.0;
    for (int t = 0; t < 50; ++t) {
        const auto H = random_channels(3, 5, rng);
        const auto V0 = closed_form_precoders(H);
        IaSolution base{stream_allocation(3, 5), optimize_precoder_subspace(V0, H, P, 0, rng), {}};
        base.U = zero_forcing_decoders(base.V, H);
        IaSolution opt{base.d, optimize_precoder_subspace(V0, H, P, 30, rng), {}};
        opt.U = zero_forcing_decoders(opt.V, H);
        EXPECT_GE(design_objective(opt, H, P), design_objective(base, H, P) - 1e-9);
        EXPECT_LE(alignment_residual(opt, H), 1e-8);
        for (int k = 0; k < 3; ++k) EXPECT_LE(projector_distance(V0[k], opt.V[k]), 1e-9);
    }
}

TEST(Optimization, ImprovesRateOverRawClosedForm) {
    Rng rng(9);
    const double P = 100.0;
    double raw = 0.0, opt = 0.0;
    for (int t = 0; t < 300; ++t) {
        const auto H = random_channels(3, 5, rng);
        IaSolution a{stream_allocation(3, 5), closed_form_precoders(H), {}};
        a.U = zero_forcing_decoders(a.V, H);
        raw += sum_rate(a, H, P);
        opt += sum_rate(design_ia(H, P, 50, rng), H, P);
    }
    EXPECT_GT(opt, raw);
}

TEST(Invariance, CommonAndPerLinkScalingKeepSpans) {
    Rng rng(10);
    const auto H = random_channels(3, 5, rng);
    const cplx alpha(0.4, -2.0);
    ChannelSet Hc = H, Hl = H;
    for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
            Hc(k, l) *= alpha;
            Hl(k, l) *= complex_normal(rng);
        }
    for (const ChannelSet* G : {&Hc, &Hl}) {
        const auto V0 = closed_form_precoders(H);
        const auto V1 = closed_form_precoders(*G);
        const auto U0 = zero_forcing_decoders(V0, H);
        const auto U1 = zero_forcing_decoders(V1, *G);
        for (int k = 0; k < 3; ++k) {
            EXPECT_LE(projector_distance(V0[k], V1[k]), 1e-9);
            for (Eigen::Index i = 0; i < U0[k].cols(); ++i)
                EXPECT_LE(projector_distance(U0[k].col(i), U1[k].col(i)), 1e-9);
        }
    }
}

TEST(Leakage, HadamardDecoderPrecoderNormBelowOne) {
    Rng rng(11);
    for (int t = 0; t < 50; ++t) {
        const auto H = random_channels(3, 5, rng);
        const auto sol = design_ia(H, 100.0, 10, rng);
        for (int k = 0; k < 3; ++k)
            for (int l = 0; l < 3; ++l)
                for (int i = 0; i < sol.d[k]; ++i)
                    for (int j = 0; j < sol.d[l]; ++j) {
                        const CVec b = sol.U[k].col(i).conjugate().cwiseProduct(sol.V[l].col(j));
                        EXPECT_LT(b.squaredNorm(), 1.0);
                    }
    }
}

TEST(SumRate, ZeroPowerGivesZeroRate) {
    Rng rng(12);
    const auto H = random_channels(3, 5, rng);
    EXPECT_EQ(sum_rate(design_ia(H, 0.0, 5, rng), H, 0.0), 0.0);
}

TEST(SumRate, LeakageOnlyReducesRate) {
    Rng rng(13);
    const double P = 300.0;
    for (int t = 0; t < 50; ++t) {
        const auto W = random_channels(3, 5, rng);
        ChannelSet Hhat = W;
        for (int k = 0; k < 3; ++k)
            for (int l = 0; l < 3; ++l) Hhat(k, l) += 0.1 * complex_normal_vector(5, rng);
        const auto sol = design_ia(Hhat, P, 10, rng);
        auto b = evaluate_links(sol, W, P);
        const double with_leakage = sum_rate(b, 5);
        for (int k = 0; k < 3; ++k) {
            b.I1[k].setZero();
            b.I2[k].setZero();
        }
        EXPECT_LE(with_leakage, sum_rate(b, 5));
    }
}

TEST(SumRate, DegreesOfFreedomSlope) {
    Rng rng(14);
    double lo = 0.0, hi = 0.0;
    const int n = 300;
    for (int t = 0; t < n; ++t) {
        const auto H = random_channels(3, 5, rng);
        lo += sum_rate(design_ia(H, 1e5, 10, rng), H, 1e5);
        hi += sum_rate(design_ia(H, 1e6, 10, rng), H, 1e6);
    }
    const double slope = (hi - lo) / n / std::log2(10.0);
    EXPECT_NEAR(slope, 7.0 / 5.0, 0.1);
}

}  // namespace
}  // namespace iafb
