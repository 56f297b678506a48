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

#include "cvrepeater/gkp_qec.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

#include "cvrepeater/errors.h"

namespace cvrep {

namespace {

constexpr double kScanStep = 0.25;
constexpr double kScanMax = 20.0;
constexpr double kExtendFactor = 1.25;
constexpr double kGainCap = 1e8;
constexpr double kGainTolerance = 1e-6;
constexpr long kSeriesTermBudget = 100000;

void require_sigma2(double sigma2) {
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
        throw std::invalid_argument("noise variance must be finite and > 0, got " + std::to_string(sigma2));
    }
}

void require_gain(double gain) {
    if (!(gain >= 1.0) || !std::isfinite(gain)) {
        throw std::invalid_argument("TMS gain must be finite and >= 1, got " + std::to_string(gain));
    }
}

double golden_section(double lo, double hi, double sigma2, const GkpParams &gkp) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    auto f = [&](double g) { return logical_noise_variance(sigma2, g, gkp); };
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = f(x1);
    double f2 = f(x2);
    for (int iter = 0; iter < 200 && (hi - lo) > kGainTolerance * std::max(1.0, lo); ++iter) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    if ((hi - lo) > kGainTolerance * std::max(1.0, lo)) {
        std::ostringstream msg;
        msg << "golden-section search did not converge: bracket [" << lo << ", " << hi << "], sigma2=" << sigma2;
        throw NumericalError(msg.str());
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double gkp_period() {
    return std::sqrt(2.0 * std::numbers::pi);
}

NoiseBudget NoiseBudget::symmetric(double variance) {
    return NoiseBudget{variance, variance};
}

double NoiseBudget::variance() const {
    if (variance_q != variance_p) {
        throw std::logic_error("asymmetric noise budget where a symmetric one is required");
    }
    return variance_q;
}

double GkpParams::sigma_G2() const {
    return 0.5 * s_gkp.variance_factor();
}

double GkpParams::sigma_G() const {
    return std::sqrt(sigma_G2());
}

long CodeParams::segments() const {
    if (!(L_km > 0.0) || !(L_delta_km > 0.0) || !std::isfinite(L_km) || !std::isfinite(L_delta_km)) {
        throw std::invalid_argument("distances must be finite and > 0");
    }
    const double ratio = L_km / L_delta_km;
    const double rounded = std::round(ratio);
    if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
        std::ostringstream msg;
        msg << "inconsistent geometry: L / L_delta = " << L_km << " / " << L_delta_km
            << " is not a positive integer";
        throw std::invalid_argument(msg.str());
    }
    return static_cast<long>(rounded);
}

IdlerChannel IdlerChannel::identity() {
    return IdlerChannel{};
}

IdlerChannel IdlerChannel::pure_loss(double eta) {
    if (!(eta >= 0.0 && eta <= 1.0)) {
        throw std::invalid_argument("transmissivity must lie in [0, 1]");
    }
    IdlerChannel c;
    c.kind = Kind::pure_loss;
    c.transmissivity = eta;
    return c;
}

IdlerChannel IdlerChannel::additive(NoiseBudget noise) {
    if (!(noise.variance_q >= 0.0) || !(noise.variance_p >= 0.0)) {
        throw std::invalid_argument("additive noise variances must be >= 0");
    }
    IdlerChannel c;
    c.kind = Kind::additive;
    c.noise = noise;
    return c;
}

GaussianState IdlerChannel::apply(const GaussianState &state, std::size_t mode) const {
    switch (kind) {
        case Kind::identity:
            return state;
        case Kind::pure_loss:
            return apply_loss(state, mode, transmissivity);
        case Kind::additive:
            return apply_additive_noise(state, mode, noise.variance());
    }
    throw std::logic_error("unknown idler channel kind");
}

double centered_mod(double x, double period) {
    if (!(period > 0.0)) {
        throw std::invalid_argument("period must be > 0");
    }
    return x - period * std::floor(x / period + 0.5);
}

double mvue_coefficient(double gain, double sigma2, double sigma_G) {
    require_gain(gain);
    require_sigma2(sigma2);
    const double syndrome_var = (2.0 * gain - 1.0) * sigma2 + 2.0 * sigma_G * sigma_G;
    return -2.0 * std::sqrt(gain * (gain - 1.0)) * sigma2 / syndrome_var;
}

double logical_noise_variance(double sigma2, double gain, const GkpParams &gkp) {
    require_sigma2(sigma2);
    require_gain(gain);
    const double pi = std::numbers::pi;
    const double sg2 = gkp.sigma_G2();
    const double two_g_m1 = 2.0 * gain - 1.0;
    const double v = two_g_m1 * sigma2 + 2.0 * sg2;
    const double scale = std::sqrt(pi / v);

    // Bracketed prefactor of the n-th window; grows like n².
    const double base = two_g_m1 * sigma2 * sigma2 + 4.0 * (1.0 + 2.0 * gain * (gain - 1.0)) * sigma2 * sg2 +
                        4.0 * two_g_m1 * sg2 * sg2;
    const double n2_coeff = 8.0 * (gain - 1.0) * gain * pi * sigma2;
    const double denom = 2.0 * v * v;
    auto prefactor = [&](double n) { return sigma2 * (n2_coeff * n * n + base) / denom; };

    // The n and −n windows carry equal weight; fold them to avoid erfc(−x) ≈ 2 cancellation.
    double sum = prefactor(0.0) * 2.0 * std::erf(0.5 * scale);
    for (long n = 1;; ++n) {
        if (n > kSeriesTermBudget) {
            std::ostringstream msg;
            msg << "logical noise series exceeded " << kSeriesTermBudget << " terms (sigma2=" << sigma2
                << ", G=" << gain << ")";
            throw NumericalError(msg.str());
        }
        const double dn = static_cast<double>(n);
        const double upper_tail = std::erfc((dn + 0.5) * scale);
        const double window = std::erfc((dn - 0.5) * scale) - upper_tail;
        const double term = 2.0 * prefactor(dn) * window;
        sum += term;
        if (upper_tail < 1e-16 && term <= 1e-17 * sum) {
            break;
        }
    }
    if (!std::isfinite(sum)) {
        throw NumericalError("logical noise series produced a non-finite value");
    }
    return sum;
}

GainOptimum optimize_gain(double sigma2, const GkpParams &gkp) {
    require_sigma2(sigma2);
    std::vector<double> gains;
    std::vector<double> values;
    const int n_scan = static_cast<int>(std::round((kScanMax - 1.0) / kScanStep));
    for (int i = 0; i <= n_scan; ++i) {
        const double g = 1.0 + kScanStep * i;
        gains.push_back(g);
        // G = 1 is the identity map; score it exactly so min_G ≤ σ² holds to the bit.
        values.push_back(i == 0 ? sigma2 : logical_noise_variance(sigma2, g, gkp));
    }
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const bool flat = (*hi_it - *lo_it) < GainOptimum::kFlatTolerance;
    std::size_t best = static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin());
    if (flat) {
        return GainOptimum{gains[best], values[best], true};
    }

    while (best + 1 == gains.size()) {
        const double g = gains.back() * kExtendFactor;
        if (g > kGainCap) {
            std::ostringstream msg;
            msg << "gain optimization did not bracket a minimum below G=" << kGainCap << " (sigma2=" << sigma2
                << ", last objective=" << values.back() << ")";
            throw NumericalError(msg.str());
        }
        gains.push_back(g);
        values.push_back(logical_noise_variance(sigma2, g, gkp));
        if (values.back() < values[best]) {
            best = values.size() - 1;
        }
    }

    GainOptimum result{gains[best], values[best], false};
    const double lo = gains[best == 0 ? 0 : best - 1];
    const double hi = gains[best + 1];
    const double refined = golden_section(lo, hi, sigma2, gkp);
    const double refined_value = logical_noise_variance(sigma2, refined, gkp);
    if (refined_value < result.sigma2_logical) {
        result.gain = refined;
        result.sigma2_logical = refined_value;
    }
    return result;
}

std::vector<double> multilayer_trajectory(double sigma2_physical, int k, const GkpParams &gkp) {
    if (k < 1) {
        throw std::invalid_argument("layer count must be >= 1");
    }
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(k));
    double v = sigma2_physical;
    for (int layer = 0; layer < k; ++layer) {
        v = optimize_gain(v, gkp).sigma2_logical;
        out.push_back(v);
    }
    return out;
}

double multilayer_noise(double sigma2_physical, int k, const GkpParams &gkp) {
    return multilayer_trajectory(sigma2_physical, k, gkp).back();
}

double segment_physical_noise(const LinkParams &link, ChannelKind kind) {
    const double eta = link.eta();
    switch (kind) {
        case ChannelKind::amplified:
            return sigma2_amplified(eta);
        case ChannelKind::teleport:
            return sigma2_teleport(eta, link.s_tele);
        case ChannelKind::direct:
            throw std::invalid_argument("direct transmission has no per-segment additive noise");
    }
    throw std::logic_error("unknown channel kind");
}

IdlerChannel end_to_end_noise(const LinkParams &link, const CodeParams &code, const GkpParams &gkp, ChannelKind kind) {
    link.validate();
    if (code.L_delta_km != link.L_delta_km) {
        throw std::invalid_argument("inconsistent geometry: code and link spacings differ");
    }
    const long segments = code.segments();
    if (kind == ChannelKind::direct) {
        return IdlerChannel::pure_loss(transmissivity(code.L_km, link.gamma_db_per_km));
    }
    if (code.k < 1) {
        throw std::invalid_argument("layer count must be >= 1");
    }
    double v = segment_physical_noise(link, kind);
    if (code.gain) {
        for (int layer = 0; layer < code.k; ++layer) {
            v = logical_noise_variance(v, *code.gain, gkp);
        }
    } else {
        v = multilayer_noise(v, code.k, gkp);
    }
    return IdlerChannel::additive(NoiseBudget::symmetric(static_cast<double>(segments) * v));
}

int gkp_wigner_min_cut(const GkpParams &gkp) {
    const double sg = gkp.sigma_G();
    if (!(sg > 0.0)) {
        throw std::invalid_argument("the Wigner function needs finite GKP squeezing");
    }
    return static_cast<int>(std::ceil(3.0 / sg));
}

double gkp_wigner(double q, double p, const GkpParams &gkp, int n_cut) {
    const int min_cut = gkp_wigner_min_cut(gkp);
    if (n_cut < min_cut) {
        throw std::invalid_argument(
            "n_cut=" + std::to_string(n_cut) + " below coverage rule ceil(3/sigma_G)=" + std::to_string(min_cut));
    }
    const double pi = std::numbers::pi;
    const double sg = gkp.sigma_G();
    const double sg2 = sg * sg;
    const double period = gkp_period();

    // Tooth pairs (n, m) contribute a Gaussian at q = (a_n + a_m)/2 with fringes cos(p(a_n − a_m)).
    double norm = 0.0;
    double value = 0.0;
    for (int n = -n_cut; n <= n_cut; ++n) {
        const double an = period * n;
        const double wn = std::exp(-pi * sg2 * n * n);
        for (int m = -n_cut; m <= n_cut; ++m) {
            const double am = period * m;
            const double w = wn * std::exp(-pi * sg2 * m * m);
            const double d = an - am;
            norm += w * std::exp(-d * d / (4.0 * sg2));
            const double u = q - 0.5 * (an + am);
            value += w * std::exp(-u * u / sg2) * std::cos(p * d);
        }
    }
    // ∫∫ of the unnormalized sum is √π·σ·norm; the prefactor σ/√π over that gives 1/π.
    return value * std::exp(-sg2 * p * p) / (pi * norm);
}

}  // namespace cvrep
