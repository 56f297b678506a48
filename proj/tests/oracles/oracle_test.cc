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

#include <cmath>
#include <numbers>

#include "cvrepeater/applications.h"
#include "cvrepeater/gaussian_state.h"
#include "cvrepeater/gkp_qec.h"
#include "cvrepeater/link_channels.h"
#include "oracles.h"

namespace {

using cvrep::GaussianState;
using cvrep::GkpParams;
using cvrep::SqueezeSpec;

constexpr double kInf = std::numeric_limits<double>::infinity();

double natural(double db) {
    return db * std::log(10.0) / 20.0;
}

TEST(FidelityOracle, VacuumVersusThermal) {
    for (double n : {0.1, 1.0, 10.0}) {
        const double expected = oracle::diagonal_fidelity(oracle::thermal_probs(0.0, 2000), oracle::thermal_probs(n, 2000));
        EXPECT_NEAR(cvrep::uhlmann_fidelity(GaussianState::vacuum(1), GaussianState::thermal(n)), expected, 1e-9);
        EXPECT_NEAR(expected, 1.0 / (1.0 + n), 1e-12);
    }
}

TEST(FidelityOracle, ThermalVersusThermal) {
    const std::pair<double, double> pairs[] = {{0.5, 2.0}, {0.1, 0.3}, {3.0, 4.0}, {0.0, 7.0}};
    for (const auto &[a, b] : pairs) {
        const double expected = oracle::diagonal_fidelity(oracle::thermal_probs(a, 3000), oracle::thermal_probs(b, 3000));
        EXPECT_NEAR(cvrep::uhlmann_fidelity(GaussianState::thermal(a), GaussianState::thermal(b)), expected, 1e-10)
            << a << " vs " << b;
    }
}

TEST(FidelityOracle, TmsvWithIdlerNoiseLaguerreSum) {
    for (double db : {3.0, 6.0, 8.0}) {
        const GaussianState tmsv = cvrep::tmsv_state(SqueezeSpec(db));
        for (double noise : {0.01, 0.05, 0.2, 1.0}) {
            const double f60 = oracle::tmsv_additive_fidelity(natural(db), noise, 60);
            const double f120 = oracle::tmsv_additive_fidelity(natural(db), noise, 120);
            ASSERT_NEAR(f60, f120, 1e-12) << "oracle truncation not converged";
            EXPECT_NEAR(cvrep::uhlmann_fidelity(tmsv, cvrep::apply_additive_noise(tmsv, 1, noise)), f120, 1e-9)
                << db << " dB, noise " << noise;
        }
    }
}

TEST(FidelityOracle, LaguerreSumAgreesWithStdLaguerre) {
    // The oracle sums Laguerre polynomials by recurrence; check one point
    // against the standard library definition.
    const double r = natural(4.0);
    const double noise = 0.3;
    const double lambda2 = std::pow(std::tanh(r), 2);
    const double t = 0.7;
    double chi = 0.0;
    for (unsigned n = 0; n < 80; ++n) {
        chi += (1.0 - lambda2) * std::pow(lambda2, n) * std::laguerre(n, t);
    }
    // The sum is the thermal characteristic function: exp(−t·λ²/(1−λ²))/… with e^{−t/2} removed.
    EXPECT_NEAR(chi, std::exp(-t * lambda2 / (1.0 - lambda2)), 1e-13);
    EXPECT_GT(oracle::tmsv_additive_fidelity(r, noise, 80), 0.0);
}

TEST(FidelityOracle, TmsvWithIdlerLossNumberBasis) {
    for (double db : {3.0, 8.0}) {
        const GaussianState tmsv = cvrep::tmsv_state(SqueezeSpec(db));
        for (double eta : {0.1, 0.5, 0.9}) {
            const double f = oracle::tmsv_pure_loss_fidelity(natural(db), eta, 60);
            ASSERT_NEAR(f, oracle::tmsv_pure_loss_fidelity(natural(db), eta, 120), 1e-13);
            EXPECT_NEAR(cvrep::uhlmann_fidelity(tmsv, cvrep::apply_loss(tmsv, 1, eta)), f, 1e-9);
        }
    }
}

// The Laguerre generating function collapses the oracle to 1/(1 + Σ²·cosh 2r),
// which stays exact at squeezing the truncated sum cannot reach.
TEST(FidelityOracle, TmsvWithIdlerNoiseAtFifteenDb) {
    const GaussianState tmsv = cvrep::tmsv_state(SqueezeSpec(15.0));
    const double cosh2r = 0.5 * (std::pow(10.0, 1.5) + std::pow(10.0, -1.5));
    const double expected = 1.0 / (1.0 + 0.05 * cosh2r);
    EXPECT_NEAR(cvrep::uhlmann_fidelity(tmsv, cvrep::apply_additive_noise(tmsv, 1, 0.05)), expected, 1e-9);
    EXPECT_NEAR(expected, 0.558236, 1e-6);
    // Cross-check the collapse itself at a truncatable squeezing.
    EXPECT_NEAR(oracle::tmsv_additive_fidelity(natural(6.0), 0.05, 120),
                1.0 / (1.0 + 0.05 * std::cosh(2.0 * natural(6.0))), 1e-12);
}

TEST(OverlapOracle, IlluminationHypothesesNumberBasis) {
    cvrep::CommParams p;
    p.N_S = 0.2;
    p.N_B = 0.3;
    p.kappa = 0.4;
    const cvrep::QiHypotheses h = cvrep::qi_hypotheses(p, cvrep::IdlerChannel::identity());

    // Thermal-loss return: loss κ/(N_B+1) then amplification N_B+1.
    const double gain = p.N_B + 1.0;
    const double tau = p.kappa / gain;
    const auto absent = oracle::thermal_product(p.N_B, p.N_S, 18, 28);
    const auto present = oracle::tmsv_through_signal_channel(p.N_S, tau, gain, 18, 28);
    ASSERT_NEAR(present.rho.trace(), 1.0, 1e-12);
    const auto absent_big = oracle::thermal_product(p.N_B, p.N_S, 22, 34);
    const auto present_big = oracle::tmsv_through_signal_channel(p.N_S, tau, gain, 22, 34);

    for (double s : {0.2, 0.5, 0.8}) {
        const double q = oracle::overlap_power(absent, present, s);
        ASSERT_NEAR(q, oracle::overlap_power(absent_big, present_big, s), 1e-12);
        EXPECT_NEAR(cvrep::gaussian_overlap(h.absent, h.present, s), q, 1e-9) << "s=" << s;
    }
}

TEST(OverlapOracle, SingleModeThermalStates) {
    for (double s : {0.3, 0.5, 0.7}) {
        const auto a = oracle::thermal_probs(0.4, 400);
        const auto b = oracle::thermal_probs(2.5, 400);
        double q = 0.0;
        for (std::size_t n = 0; n < a.size(); ++n) {
            q += std::pow(a[n], s) * std::pow(b[n], 1.0 - s);
        }
        EXPECT_NEAR(cvrep::gaussian_overlap(GaussianState::thermal(0.4), GaussianState::thermal(2.5), s), q, 1e-12);
    }
}

TEST(LogicalNoiseOracle, SeriesMatchesCellQuadrature) {
    for (double sigma2 : {0.01, 0.02, 0.05, 0.1, 0.3}) {
        for (double sg_db : {10.0, 15.0, 20.0, kInf}) {
            const GkpParams gkp{std::isinf(sg_db) ? SqueezeSpec::infinite() : SqueezeSpec(sg_db)};
            for (double gain : {1.0, 1.5, 2.0, 4.0, 10.0}) {
                const double expected = oracle::logical_noise_by_quadrature(sigma2, gain, gkp.sigma_G());
                EXPECT_NEAR(cvrep::logical_noise_variance(sigma2, gain, gkp), expected, 1e-10 * expected)
                    << "sigma2=" << sigma2 << " s_gkp=" << sg_db << " G=" << gain;
            }
        }
    }
}

TEST(GainOracle, DenseGridSearch) {
    const double sigma2 = cvrep::sigma2_teleport(cvrep::transmissivity(1.0), SqueezeSpec(20.0));
    const GkpParams gkp{SqueezeSpec(20.0)};
    double best_g = 1.0;
    double best = oracle::logical_noise_by_quadrature(sigma2, 1.0, gkp.sigma_G());
    for (int i = 1; i <= 9000; ++i) {
        const double g = 1.0 + 1e-3 * i;
        const double v = oracle::logical_noise_by_quadrature(sigma2, g, gkp.sigma_G());
        if (v < best) {
            best = v;
            best_g = g;
        }
    }
    const cvrep::GainOptimum opt = cvrep::optimize_gain(sigma2, gkp);
    EXPECT_NEAR(opt.gain, best_g, 2e-3);
    EXPECT_LE(opt.sigma2_logical, best * (1.0 + 1e-10));
    EXPECT_FALSE(opt.flat);
}

class WignerOracle : public ::testing::Test {
   protected:
    // Trapezoid in p; the integrand is a Gaussian envelope times cosines.
    static double p_marginal(double q, const GkpParams &gkp, int n_cut, double p_max, double h) {
        const int n = static_cast<int>(std::ceil(p_max / h));
        double sum = 0.0;
        for (int i = -n; i <= n; ++i) {
            sum += cvrep::gkp_wigner(q, i * h, gkp, n_cut);
        }
        return sum * h;
    }
};

TEST_F(WignerOracle, PositionMarginalMatchesWavefunction) {
    const GkpParams gkp{SqueezeSpec(10.0)};
    const int n_cut = cvrep::gkp_wigner_min_cut(gkp);
    const double sg = gkp.sigma_G();
    const double period = std::sqrt(2.0 * std::numbers::pi);

    double norm = 0.0;
    const double q_max = (n_cut + 3) * period;
    const double hq = 1e-3;
    for (double q = -q_max; q <= q_max; q += hq) {
        norm += oracle::gkp_position_density(q, sg, n_cut) * hq;
    }
    for (double q : {0.0, 0.3, 0.5 * period, period, 2.2 * period}) {
        const double expected = oracle::gkp_position_density(q, sg, n_cut) / norm;
        EXPECT_NEAR(p_marginal(q, gkp, n_cut, 8.0 / sg, 0.004), expected, 1e-8) << "q=" << q;
    }
}

TEST_F(WignerOracle, IntegratesToOne) {
    const GkpParams gkp{SqueezeSpec(5.0)};
    const int n_cut = cvrep::gkp_wigner_min_cut(gkp);
    const double sg = gkp.sigma_G();
    const double period = std::sqrt(2.0 * std::numbers::pi);
    const double q_max = (n_cut + 2) * period;
    const double hq = 0.1;
    double total = 0.0;
    for (double q = -q_max; q <= q_max; q += hq) {
        total += p_marginal(q, gkp, n_cut, 7.0 / sg, 0.02) * hq;
    }
    EXPECT_NEAR(total, 1.0, 1e-6);
}

TEST_F(WignerOracle, MarginalRatioBetweenToothAndGap) {
    // The gap sits half a period from a tooth, so the ratio is set by
    // exp(−(P/2)²/σ_G²) of the squared wavefunction, up to the envelope.
    const GkpParams gkp{SqueezeSpec(5.0)};
    const int n_cut = cvrep::gkp_wigner_min_cut(gkp);
    const double sg = gkp.sigma_G();
    const double period = std::sqrt(2.0 * std::numbers::pi);
    const double tooth = p_marginal(0.0, gkp, n_cut, 8.0 / sg, 0.004);
    const double gap = p_marginal(0.5 * period, gkp, n_cut, 8.0 / sg, 0.004);
    const double expected = oracle::gkp_position_density(0.5 * period, sg, n_cut) /
                            oracle::gkp_position_density(0.0, sg, n_cut);
    EXPECT_NEAR(gap / tooth, expected, 1e-6 * expected + 1e-12);
    EXPECT_LT(gap / tooth, std::exp(-std::numbers::pi / (4.0 * sg * sg)));
}

}  // namespace
