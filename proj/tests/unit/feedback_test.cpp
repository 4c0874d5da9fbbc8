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

#include "iafb/channel.hpp"
#include "iafb/feedback.hpp"
#include "iafb/predictor.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <vector>

namespace iafb {
namespace {

const std::vector<int> kPilots{1, 4, 7, 10, 13};

/// Two-sided Kolmogorov-Smirnov statistic of samples against a CDF.
template <class Cdf>
double ks_statistic(std::vector<double> x, Cdf cdf) {
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double F = cdf(x[i]);
        d = std::max({d, (i + 1) / n - F, F - i / n});
    }
    return d;
}

TEST(CoefficientCovariance, ScalarCaseOnFullWindow) {
    std::vector<int> all(15);
    std::iota(all.begin(), all.end(), 1);
    const auto b = compute_basis(15, 0.004, 30, all, 1);
    const double P = 100.0;
    const std::vector<double> pdp{5.0 / 3, 5.0 / 3, 5.0 / 3};
    const auto st = coefficient_covariance(b, pdp, P);
    const RVec u0 = b.U.col(0);
    const double expected = pdp[0] * u0.dot(flat_covariance(15, 0.004) * u0) + 1.0 / P;
    ASSERT_EQ(st.lambda_s.size(), 3u);
    for (const auto& l : st.lambda_s) EXPECT_NEAR(l(0, 0), expected, 1e-12);
    EXPECT_NEAR(expected, pdp[0] * b.eigenvalues(0) + 1.0 / P, 1e-10);
}

TEST(CoefficientCovariance, BlockDiagonalFactor) {
    const auto b = compute_basis(15, 0.004, 60, kPilots, 2);
    const std::vector<double> pdp{2.0, 2.0, 1.0};
    const auto st = coefficient_covariance(b, pdp, 1000.0);
    EXPECT_LT((st.Sigma * st.Sigma.transpose() - st.R_eta).norm(), 1e-10 * st.R_eta.norm());
    EXPECT_EQ(st.R_eta.block(0, 2, 2, 2).norm(), 0.0);
    EXPECT_EQ(st.R_eta.block(2, 4, 2, 2).norm(), 0.0);
    const RMat white = st.Sigma.inverse() * st.R_eta * st.Sigma.inverse().transpose();
    EXPECT_NEAR(white.trace(), st.dim(), 1e-9);
}

TEST(CoefficientCovariance, MatchesMonteCarloUnderMatchedStatistics) {
    SimConfig cfg;
    cfg.spectrum = DopplerShape::flat;
    cfg.nu_D = 0.004;
    cfg.P = 100.0;
    cfg.T = 1;
    const auto b = compute_basis(cfg.M, cfg.nu_D, cfg.horizon(), kPilots, 2);
    const auto pdp = cfg.power_delay_profile();
    const auto st = coefficient_covariance(b, pdp, cfg.P);
    const FadingSynthesizer synth(cfg.horizon(), DopplerSpectrum(cfg.spectrum, cfg.nu_D));
    Rng rng(31);
    const int n = 100000;
    CMat acc = CMat::Zero(6, 6);
    for (int t = 0; t < n; ++t) {
        const auto link = generate_link(cfg.N, pdp, synth, rng);
        const auto obs = observe_pilots(link, kPilots, cfg.P, rng);
        const CVec eta = estimate_subspace(obs, b, cfg.S).eta;
        acc += eta * eta.adjoint();
    }
    acc /= n;
    for (int i = 0; i < 6; ++i) EXPECT_NEAR(acc(i, i).real(), st.R_eta(i, i), 0.05 * st.R_eta(i, i));
    for (int s = 0; s < 3; ++s) {
        const double off = std::abs(acc(2 * s, 2 * s + 1));
        EXPECT_NEAR(off, std::abs(st.R_eta(2 * s, 2 * s + 1)), 0.05 * std::sqrt(st.R_eta(2 * s, 2 * s) * st.R_eta(2 * s + 1, 2 * s + 1)));
    }
}

TEST(Whitening, IdentityFactorIsIdentityMap) {
    CoefficientStatistics st;
    st.D = 2;
    st.S = 2;
    st.Sigma = RMat::Identity(4, 4);
    Rng rng(1);
    const CVec x = complex_normal_vector(4, rng);
    EXPECT_EQ((whiten(x, st) - x).norm(), 0.0);
    EXPECT_EQ((unwhiten(x, st) - x).norm(), 0.0);
}

TEST(Whitening, RoundTripOfNormalizedVectorIsCollinear) {
    const auto b = compute_basis(15, 0.004, 60, kPilots, 2);
    const auto st = coefficient_covariance(b, std::vector<double>{5.0 / 3, 5.0 / 3, 5.0 / 3}, 1000.0);
    Rng rng(2);
    const CVec eta = complex_normal_vector(6, rng);
    const CVec w = whiten(eta, st);
    const CVec back = unwhiten(w / w.norm(), st);
    EXPECT_LT(chordal_distance_sq(back, eta), 1e-20);
}

TEST(Whitening, WhitenedEntriesAreUncorrelated) {
    SimConfig cfg;
    cfg.spectrum = DopplerShape::flat;
    cfg.P = 1000.0;
    cfg.T = 1;
    const auto b = compute_basis(cfg.M, cfg.nu_D, cfg.horizon(), kPilots, 2);
    const auto pdp = cfg.power_delay_profile();
    const auto st = coefficient_covariance(b, pdp, cfg.P);
    const FadingSynthesizer synth(cfg.horizon(), DopplerSpectrum(cfg.spectrum, cfg.nu_D));
    Rng rng(3);
    const int n = 40000;
    CMat acc = CMat::Zero(6, 6);
    for (int t = 0; t < n; ++t) {
        const auto link = generate_link(cfg.N, pdp, synth, rng);
        const CVec w = whiten(estimate_subspace(observe_pilots(link, kPilots, cfg.P, rng), b, cfg.S).eta, st);
        acc += w * w.adjoint();
    }
    acc /= n;
    const double sigma = 1.0 / std::sqrt(static_cast<double>(n));
    for (int i = 0; i < 6; ++i) {
        EXPECT_NEAR(acc(i, i).real(), 1.0, 4.0 * sigma);
        for (int j = 0; j < i; ++j) EXPECT_LT(std::abs(acc(i, j)), 3.0 * sigma);
    }
}

TEST(QuantizeExplicit, CodewordEqualToInputHasZeroDistance) {
    Rng rng(4);
    auto cb = Codebook::random(3, 4, rng);
    const CVec x = 2.5 * cb.codeword(5) * std::polar(1.0, 0.7);
    const auto q = quantize_explicit(x, cb);
    EXPECT_EQ(q.index, 5);
    EXPECT_NEAR(q.distance_sq, 0.0, 1e-12);
}

TEST(QuantizeExplicit, OrthogonalPairPicksSecond) {
    CMat v(2, 2);
    v << 1.0, 0.0, 0.0, 1.0;
    const Codebook cb(1, v);
    CVec x(2);
    x << 0.0, cplx(0.0, 3.0);
    EXPECT_EQ(quantize_explicit(x, cb).index, 1);
}

TEST(QuantizeExplicit, TiesGoToLowestIndex) {
    CMat v(2, 2);
    v << 1.0, 0.0, 0.0, 1.0;
    const Codebook cb(1, v);
    CVec x(2);
    x << 1.0, cplx(0.0, 1.0);
    EXPECT_EQ(quantize_explicit(x, cb).index, 0);
}

TEST(QuantizeExplicit, IndexInvariantToComplexScaling) {
    Rng rng(5);
    const auto cb = Codebook::random(8, 6, rng);
    for (int t = 0; t < 50; ++t) {
        const CVec x = complex_normal_vector(6, rng);
        const cplx alpha = complex_normal(rng);
        EXPECT_EQ(quantize_explicit(x, cb).index, quantize_explicit(alpha * x, cb).index);
    }
}

TEST(QuantizeExplicit, RejectsDimensionMismatch) {
    Rng rng(6);
    const auto cb = Codebook::random(2, 4, rng);
    EXPECT_THROW(quantize_explicit(CVec::Ones(5), cb), ConfigError);
}

TEST(Codebook, UnitNormVectors) {
    Rng rng(7);
    const auto cb = Codebook::random(10, 6, rng);
    for (Eigen::Index i = 0; i < cb.size(); ++i) EXPECT_NEAR(cb.vectors().row(i).norm(), 1.0, 1e-12);
}

TEST(Codebook, FileRoundTripAndLayout) {
    Rng rng(8);
    const auto cb = Codebook::random(3, 2, rng);
    const auto path = std::filesystem::temp_directory_path() / "iafb_codebook_test.rvq";
    cb.save(path);
    EXPECT_EQ(std::filesystem::file_size(path), 16u + 8u * 2u * 16u);
    std::ifstream in(path, std::ios::binary);
    unsigned char head[16];
    in.read(reinterpret_cast<char*>(head), 16);
    EXPECT_EQ(std::string(reinterpret_cast<char*>(head), 4), "RVQ1");
    EXPECT_EQ(head[4], 3);
    EXPECT_EQ(head[5] | head[6] | head[7], 0);
    EXPECT_EQ(head[8], 2);
    double re;
    in.read(reinterpret_cast<char*>(&re), 8);
    EXPECT_EQ(re, cb.vectors()(0, 0).real());
    const auto back = Codebook::load(path);
    EXPECT_EQ(back.bits(), 3);
    EXPECT_EQ(back.dim(), 2);
    EXPECT_EQ((back.vectors() - cb.vectors()).norm(), 0.0);
    std::filesystem::remove(path);
}

TEST(Codebook, RejectsForeignFile) {
    const auto path = std::filesystem::temp_directory_path() / "iafb_codebook_bad.rvq";
    {
        std::ofstream out(path, std::ios::binary);
        out << "NOPE0000000000000000";
    }
    EXPECT_THROW(Codebook::load(path), ConfigError);
    std::filesystem::remove(path);
}

TEST(QuantizePerturbation, ManyBitsReturnInputDirection) {
    Rng rng(9);
    const CVec x = complex_normal_vector(6, rng);
    const auto q = quantize_perturbation(x, 400.0, rng);
    EXPECT_LT(chordal_distance_sq(q.direction, x), 1e-12);
}

TEST(QuantizePerturbation, OutputIsUnitAndAtSampledDistance) {
    Rng rng(10);
    for (int t = 0; t < 200; ++t) {
        const CVec x = complex_normal_vector(6, rng);
        const auto q = quantize_perturbation(x, 6.0, rng);
        EXPECT_NEAR(q.direction.norm(), 1.0, 1e-12);
        EXPECT_NEAR(chordal_distance_sq(q.direction, x), q.distance_sq, 1e-10);
    }
}

TEST(QuantizePerturbation, SingleCodewordInTwoDimensionsIsUniform) {
    Rng rng(11);
    std::vector<double> d2;
    for (int t = 0; t < 20000; ++t) d2.push_back(sample_rvq_distance_sq(2, 0.0, rng));
    const double ks = ks_statistic(d2, [](double x) { return x; });
    EXPECT_LT(ks, 1.63 / std::sqrt(20000.0));
}

TEST(QuantizePerturbation, MatchesExplicitSearchLaw) {
    Rng rng(12);
    const int dim = 4, bits = 6, n = 20000;
    std::vector<double> d2;
    Codebook cb;
    for (int t = 0; t < n; ++t) {
        if (t % 100 == 0) cb = Codebook::random(bits, dim, rng);
        d2.push_back(quantize_explicit(complex_normal_vector(dim, rng), cb).distance_sq);
    }
    const double ks = ks_statistic(d2, [&](double x) { return rvq_distance_cdf(x, dim, bits); });
    EXPECT_LT(ks, 1.63 / std::sqrt(static_cast<double>(n)));
}

TEST(QuantizePerturbation, MeanDistortionDecreasesWithBits) {
    for (int dim : {3, 6}) {
        double prev_p = 2.0, prev_e = 2.0;
        for (int bits = 2; bits <= 10; bits += 2) {
            Rng rng(static_cast<std::uint64_t>(100 + bits));
            double mp = 0.0, me = 0.0;
            const int n = 4000;
            Codebook cb;
            for (int t = 0; t < n; ++t) {
                const CVec x = complex_normal_vector(dim, rng);
                mp += quantize_perturbation(x, bits, rng).distance_sq;
                if (t % 50 == 0) cb = Codebook::random(bits, dim, rng);
                me += quantize_explicit(x, cb).distance_sq;
            }
            mp /= n;
            me /= n;
            EXPECT_LT(mp, prev_p);
            EXPECT_LT(me, prev_e);
            prev_p = mp;
            prev_e = me;
        }
    }
}

TEST(RequiredBits, Examples) {
    EXPECT_EQ(required_bits(6, 1e3), 50);
    EXPECT_EQ(required_bits(2, 4.0), 2);
    EXPECT_THROW(required_bits(6, 1.0), ConfigError);
}

TEST(ChordalDistance, ZeroForCollinearAndOneForOrthogonal) {
    CVec a(2), b(2);
    a << 1.0, cplx(0.0, 1.0);
    b = cplx(0.0, -2.0) * a;
    EXPECT_NEAR(chordal_distance_sq(a, b), 0.0, 1e-15);
    b << cplx(0.0, 1.0), 1.0;
    EXPECT_NEAR(chordal_distance_sq(a, b), 1.0, 1e-15);
}

}  // namespace
}  // namespace iafb
