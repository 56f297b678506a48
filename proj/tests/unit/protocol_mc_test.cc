// Copyright 2026 The cvrepeater Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "cvrepeater/gkp_qec.h"
#include "cvrepeater/protocol_mc.h"

namespace {

using cvrep::GkpParams;
using cvrep::McConfig;
using cvrep::SqueezeSpec;

McConfig config(double sigma2, double gain, double sigma_G, std::uint64_t seed = 42, std::size_t n = 400000) {
    McConfig cfg;
    cfg.n_samples = n;
    cfg.seed = seed;
    cfg.sigma2 = sigma2;
    cfg.gain = gain;
    cfg.sigma_G = sigma_G;
    return cfg;
}

TEST(Summarize, ConstantStream) {
    const std::vector<double> xs(1000, 3.25);
    const auto est = cvrep::summarize(xs);
    EXPECT_EQ(est.mean, 3.25);
    EXPECT_EQ(est.variance, 0.0);
    EXPECT_EQ(est.standard_error, 0.0);
    EXPECT_THROW(cvrep::summarize(std::vector<double>{}), std::invalid_argument);
}

TEST(Summarize, StandardNormalCalibration) {
    cvrep::NormalStream normal(123);
    std::vector<double> xs(1000000);
    for (double &x : xs) {
        x = normal.next();
    }
    const auto est = cvrep::summarize(xs);
    EXPECT_LE(std::abs(est.variance - 1.0), 3.0 * est.standard_error);
    EXPECT_LE(std::abs(est.mean), 3.0 * est.mean_standard_error);
    // Var of the sample variance of N(0,1) is 2/n.
    EXPECT_NEAR(est.standard_error, std::sqrt(2.0 / 1e6), 2e-5);
}

TEST(NormalStream, TailMatchesNormal) {
    cvrep::NormalStream normal(77);
    const int n = 4000000;
    int beyond3 = 0;
    for (int i = 0; i < n; ++i) {
        beyond3 += std::abs(normal.next()) > 3.0;
    }
    const double p = std::erfc(3.0 / std::numbers::sqrt2);
    const double se = std::sqrt(p * (1.0 - p) / n);
    EXPECT_LE(std::abs(beyond3 / static_cast<double>(n) - p), 4.0 * se);
}

TEST(Substreams, DistinctAndStable) {
    EXPECT_EQ(cvrep::substream_seed(1, 2), cvrep::substream_seed(1, 2));
    EXPECT_NE(cvrep::substream_seed(1, 2), cvrep::substream_seed(1, 3));
    EXPECT_NE(cvrep::substream_seed(1, 2), cvrep::substream_seed(2, 2));
}

TEST(ProtocolMc, NoCorrectionAtUnitGain) {
    const auto est = cvrep::estimate_variance(config(0.05, 1.0, 0.05));
    EXPECT_LE(std::abs(est.variance - 0.05), 3.0 * est.standard_error);
}

TEST(ProtocolMc, UselessSyndromeGivesNoImprovement) {
    // σ_G ≫ √(2π): the wrapped syndrome is uniform noise.
    const auto est = cvrep::estimate_variance(config(0.05, 2.0, 50.0));
    EXPECT_GE(est.variance, 0.05 - 3.0 * est.standard_error);
}

TEST(ProtocolMc, MatchesSeriesAtTwentyDb) {
    const GkpParams gkp{SqueezeSpec(20.0)};
    const auto est = cvrep::estimate_variance(config(0.05, 2.0, gkp.sigma_G(), 99, 1000000));
    const double analytic = cvrep::logical_noise_variance(0.05, 2.0, gkp);
    EXPECT_LE(std::abs(est.variance - analytic), 3.0 * est.standard_error)
        << "mc=" << est.variance << " se=" << est.standard_error << " analytic=" << analytic;
    EXPECT_LT(analytic, 0.05);
}

TEST(ProtocolMc, ZeroMean) {
    for (double g : {1.5, 2.0, 4.0}) {
        const auto est = cvrep::estimate_variance(config(0.05, g, 0.05, 5));
        EXPECT_LE(std::abs(est.mean), 3.0 * est.mean_standard_error) << "G=" << g;
    }
}

TEST(ProtocolMc, SeededDeterminism) {
    const McConfig cfg = config(0.02, 1.5, 0.07, 8, 200000);
    const auto a = cvrep::sample_logical_error(cfg, 1);
    const auto b = cvrep::sample_logical_error(cfg, 1);
    EXPECT_EQ(a, b);
    const auto c = cvrep::sample_logical_error(config(0.02, 1.5, 0.07, 9, 200000), 1);
    EXPECT_NE(a, c);
}

TEST(ProtocolMc, IndependentOfWorkerCount) {
    const McConfig cfg = config(0.02, 1.5, 0.07, 8, 3 * cvrep::kMcChunkSize + 17);
    EXPECT_EQ(cvrep::sample_logical_error(cfg, 1), cvrep::sample_logical_error(cfg, 4));
}

TEST(ProtocolMc, RefusesUnderpoweredEstimates) {
    EXPECT_THROW(cvrep::estimate_variance(config(0.05, 2.0, 0.05, 1, 9999)), std::invalid_argument);
    EXPECT_NO_THROW(cvrep::sample_logical_error(config(0.05, 2.0, 0.05, 1, 10)));
    EXPECT_THROW(cvrep::sample_logical_error(config(0.0, 2.0, 0.05)), std::invalid_argument);
    EXPECT_THROW(cvrep::sample_logical_error(config(0.05, 0.5, 0.05)), std::invalid_argument);
    EXPECT_THROW(cvrep::sample_logical_error(config(0.05, 2.0, -1.0)), std::invalid_argument);
}

// The p quadrature sees the TMS correlation with the opposite sign, and the
// estimator flips with it. Sampled independently here.
TEST(ProtocolMc, QuadraturesAgree) {
    const double sigma2 = 0.05;
    const double g = 2.0;
    const GkpParams gkp{SqueezeSpec(15.0)};
    const double sg = gkp.sigma_G();
    const double cross = 2.0 * std::sqrt(g * (g - 1.0));
    Eigen::Matrix2d form;
    form << 2.0 * g - 1.0, -cross, -cross, 2.0 * g - 1.0;
    const Eigen::Matrix2d chol = (sigma2 * form.inverse()).llt().matrixL();
    const double c = -cvrep::mvue_coefficient(g, sigma2, sg);
    const double period = cvrep::gkp_period();

    std::mt19937_64 rng(31337);
    std::normal_distribution<double> n01;
    std::vector<double> p_errors(1000000);
    for (double &e : p_errors) {
        const double z1 = n01(rng);
        const double z2 = n01(rng);
        const double xi1 = chol(0, 0) * z1;
        const double xi2 = chol(1, 0) * z1 + chol(1, 1) * z2;
        e = xi1 - c * cvrep::centered_mod(xi2 + std::sqrt(2.0) * sg * n01(rng), period);
    }
    const auto p = cvrep::summarize(p_errors);
    const auto q = cvrep::estimate_variance(config(sigma2, g, sg, 4, 1000000));
    const double se = std::hypot(p.standard_error, q.standard_error);
    EXPECT_LE(std::abs(p.variance - q.variance), 3.0 * se) << "p=" << p.variance << " q=" << q.variance;
}

}  // namespace
