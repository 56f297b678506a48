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

#include "cvrepeater/protocol_mc.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "cvrepeater/gkp_qec.h"
#include "cvrepeater/parallel.h"

namespace cvrep {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

}  // namespace

void McConfig::validate() const {
    if (n_samples == 0) {
        throw std::invalid_argument("n_samples must be positive");
    }
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
        throw std::invalid_argument("sigma2 must be finite and > 0");
    }
    if (!(gain >= 1.0) || !std::isfinite(gain)) {
        throw std::invalid_argument("gain must be finite and >= 1");
    }
    if (!(sigma_G >= 0.0) || !std::isfinite(sigma_G)) {
        throw std::invalid_argument("sigma_G must be finite and >= 0");
    }
}

NormalStream::NormalStream(std::uint64_t seed) : engine_(seed) {
}

double NormalStream::next() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = 1.0 - static_cast<double>(engine_() >> 11) * 0x1.0p-53;  // (0, 1]
    const double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;        // [0, 1)
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(seed ^ splitmix64(index));
}

std::vector<double> sample_logical_error(const McConfig &cfg, std::size_t workers) {
    cfg.validate();
    const double g = cfg.gain;
    const double cross = 2.0 * std::sqrt(g * (g - 1.0));

    // Channel noise after the inverse TMS gate: Gaussian with the inverse of
    // this quadratic form as covariance.
    Eigen::Matrix2d form;
    form << 2.0 * g - 1.0, cross, cross, 2.0 * g - 1.0;
    form /= cfg.sigma2;
    const Eigen::Matrix2d cov = form.inverse();
    const Eigen::Matrix2d chol = cov.llt().matrixL();

    // Syndrome picks up the tooth noise of two GKP ancillas: variance 2σ_G².
    const double gkp_std = std::sqrt(2.0) * cfg.sigma_G;
    const double coefficient = mvue_coefficient(g, cfg.sigma2, cfg.sigma_G);
    const double period = gkp_period();

    std::vector<double> out(cfg.n_samples);
    const std::size_t n_chunks = (cfg.n_samples + kMcChunkSize - 1) / kMcChunkSize;
    parallel_for(
        n_chunks,
        [&](std::size_t chunk) {
            NormalStream normal(substream_seed(cfg.seed, chunk));
            const std::size_t begin = chunk * kMcChunkSize;
            const std::size_t end = std::min(cfg.n_samples, begin + kMcChunkSize);
            for (std::size_t i = begin; i < end; ++i) {
                const double z1 = normal.next();
                const double z2 = normal.next();
                const double z3 = normal.next();
                const double xi1 = chol(0, 0) * z1;
                const double xi2 = chol(1, 0) * z1 + chol(1, 1) * z2;
                const double syndrome = centered_mod(xi2 + gkp_std * z3, period);
                out[i] = xi1 - coefficient * syndrome;
            }
        },
        workers);
    return out;
}

VarianceEstimate summarize(std::span<const double> samples) {
    VarianceEstimate est;
    est.n = samples.size();
    if (samples.empty()) {
        throw std::invalid_argument("cannot summarize an empty sample");
    }
    const double n = static_cast<double>(samples.size());
    double sum = 0.0;
    for (double x : samples) {
        sum += x;
    }
    est.mean = sum / n;
    if (samples.size() < 2) {
        return est;
    }
    double m2 = 0.0;
    double m4 = 0.0;
    for (double x : samples) {
        const double d = x - est.mean;
        const double d2 = d * d;
        m2 += d2;
        m4 += d2 * d2;
    }
    est.variance = m2 / (n - 1.0);
    const double mu4 = m4 / n;
    const double var_of_var = (mu4 - (n - 3.0) / (n - 1.0) * est.variance * est.variance) / n;
    est.standard_error = std::sqrt(std::max(var_of_var, 0.0));
    est.mean_standard_error = std::sqrt(est.variance / n);
    return est;
}

VarianceEstimate estimate_variance(const McConfig &cfg, std::size_t workers) {
    if (cfg.n_samples < McConfig::kMinReportedSamples) {
        throw std::invalid_argument(
            "reported estimates need at least " + std::to_string(McConfig::kMinReportedSamples) + " samples");
    }
    const std::vector<double> samples = sample_logical_error(cfg, workers);
    return summarize(samples);
}

}  // namespace cvrep
