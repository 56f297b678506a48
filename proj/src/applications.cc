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

#include "cvrepeater/applications.h"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "cvrepeater/errors.h"

namespace cvrep {

namespace {

constexpr double kOverlapEdge = 1e-6;

double x_log2_x(double x) {
    return x > 0.0 ? x * std::log2(x) : 0.0;
}

}  // namespace

void CommParams::validate() const {
    if (!(N_S >= 0.0) || !std::isfinite(N_S)) {
        throw std::invalid_argument("N_S must be finite and >= 0");
    }
    if (!(N_B >= 0.0) || !std::isfinite(N_B)) {
        throw std::invalid_argument("N_B must be finite and >= 0");
    }
    if (!(kappa > 0.0 && kappa <= 1.0)) {
        throw std::invalid_argument("kappa must lie in (0, 1]");
    }
    if (M < 0) {
        throw std::invalid_argument("M must be >= 0");
    }
}

std::vector<std::string> regime_warnings(const CommParams &p) {
    std::vector<std::string> out;
    if (p.kappa > 0.1) {
        std::ostringstream msg;
        msg << "kappa=" << p.kappa << " is not << 1; asymptotic formulas may be inaccurate";
        out.push_back(msg.str());
    }
    if (p.N_B < 10.0) {
        std::ostringstream msg;
        msg << "N_B=" << p.N_B << " is not >> 1; asymptotic formulas may be inaccurate";
        out.push_back(msg.str());
    }
    return out;
}

double gordon_g(double x) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
        throw std::invalid_argument("g(x) needs finite x >= 0");
    }
    return x_log2_x(x + 1.0) - x_log2_x(x);
}

double classical_capacity(const CommParams &p) {
    p.validate();
    return gordon_g(p.kappa * p.N_S + p.N_B) - gordon_g(p.N_B);
}

double holevo_ratio(const CommParams &p, const IdlerChannel &idler) {
    p.validate();
    if (!(p.N_S > 0.0)) {
        throw std::invalid_argument("Holevo ratio needs N_S > 0");
    }
    const double ns = p.N_S;
    switch (idler.kind) {
        case IdlerChannel::Kind::identity:
            return (ns + 1.0) * std::log1p(1.0 / ns);
        case IdlerChannel::Kind::pure_loss: {
            const double eta = idler.transmissivity;
            if (!(eta > 0.0)) {
                throw std::invalid_argument("direct distribution needs transmissivity > 0");
            }
            return eta * (ns + 1.0) * std::log1p(1.0 / (eta * ns));
        }
        case IdlerChannel::Kind::additive: {
            const double v = idler.noise.variance();
            if (!(v > 0.0)) {
                throw std::invalid_argument("QEC teleportation needs positive residual noise; use the ideal kind");
            }
            return (ns + 1.0) * std::log1p(1.0 / v) - ns / (v + v * v);
        }
    }
    throw std::logic_error("unknown idler channel kind");
}

QiHypotheses qi_hypotheses(const CommParams &p, const IdlerChannel &idler_storage) {
    p.validate();
    const GaussianState tmsv = tmsv_with_mean_photons(p.N_S);

    // Target present: thermal-loss return with bath N_B/(1−κ), i.e. κ·V + (N_B + (1−κ)/2)·I.
    GaussianState present = apply_additive_noise(apply_loss(tmsv, 0, p.kappa), 0, p.N_B);

    // Target absent: the return is pure background, uncorrelated with the idler.
    Eigen::MatrixXd absent_cov = tmsv.cov();
    absent_cov.block(0, 0, 2, 2) = (p.N_B + 0.5) * Eigen::Matrix2d::Identity();
    absent_cov.block(0, 2, 2, 2).setZero();
    absent_cov.block(2, 0, 2, 2).setZero();
    GaussianState absent(std::move(absent_cov));

    return QiHypotheses{idler_storage.apply(absent, 1), idler_storage.apply(present, 1)};
}

double ChernoffBound::exponent() const {
    return -std::log(overlap);
}

ChernoffBound quantum_chernoff(const GaussianState &a, const GaussianState &b) {
    auto objective = [&](double s) { return std::log(gaussian_overlap(a, b, s)); };
    std::uintmax_t max_iter = 200;
    const auto [s_opt, log_q] =
        boost::math::tools::brent_find_minima(objective, kOverlapEdge, 1.0 - kOverlapEdge, 52, max_iter);
    if (max_iter >= 200 || !std::isfinite(log_q)) {
        std::ostringstream msg;
        msg << "Chernoff minimization over s failed (s=" << s_opt << ", log Q=" << log_q << ")";
        throw NumericalError(msg.str());
    }
    return ChernoffBound{std::min(std::exp(log_q), 1.0), s_opt};
}

double qi_error_bound(const ChernoffBound &bound, long M) {
    if (M < 0) {
        throw std::invalid_argument("M must be >= 0");
    }
    return 0.5 * std::exp(-static_cast<double>(M) * bound.exponent());
}

double qi_error_bound(const CommParams &p, const IdlerChannel &idler_storage) {
    if (p.M == 0) {
        return 0.5;
    }
    const QiHypotheses h = qi_hypotheses(p, idler_storage);
    return qi_error_bound(quantum_chernoff(h.absent, h.present), p.M);
}

double ci_exponent(const CommParams &p) {
    p.validate();
    const double gap = std::sqrt(p.N_B + 1.0) - std::sqrt(p.N_B);
    return p.kappa * p.N_S * gap * gap;
}

double ci_error_bound(const CommParams &p) {
    return 0.5 * std::exp(-static_cast<double>(p.M) * ci_exponent(p));
}

double qkd_skr(double epsilon) {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
        throw std::invalid_argument("excess noise must be finite and > 0");
    }
    const double e = std::numbers::e;
    return -0.5 * std::log2(e * e * epsilon * (1.0 + epsilon) / 4.0);
}

double qkd_secure_rate(double epsilon) {
    return std::max(0.0, qkd_skr(epsilon));
}

double qkd_noise_threshold() {
    const double e = std::numbers::e;
    return 0.5 * (-1.0 + std::sqrt(1.0 + 16.0 / (e * e)));
}

double max_secure_distance(const LinkParams &link, const GkpParams &gkp, int k) {
    link.validate();
    auto secure = [&](long segments) {
        CodeParams code;
        code.k = k;
        code.L_delta_km = link.L_delta_km;
        code.L_km = static_cast<double>(segments) * link.L_delta_km;
        const double eps = end_to_end_noise(link, code, gkp, ChannelKind::teleport).noise.variance();
        return qkd_skr(eps) > 0.0;
    };
    if (!secure(1)) {
        return 0.0;
    }
    long lo = 1;
    long hi = 2;
    constexpr long kSegmentCap = 1L << 40;
    while (secure(hi)) {
        lo = hi;
        hi *= 2;
        if (hi > kSegmentCap) {
            throw NumericalError("secure distance exceeds the segment search cap");
        }
    }
    while (hi - lo > 1) {
        const long mid = lo + (hi - lo) / 2;
        (secure(mid) ? lo : hi) = mid;
    }
    return static_cast<double>(lo) * link.L_delta_km;
}

double plob_bound(double eta) {
    if (!(eta > 0.0 && eta < 1.0)) {
        throw std::invalid_argument("PLOB bound needs transmissivity in (0, 1)");
    }
    return -std::log2(1.0 - eta);
}

}  // namespace cvrep
