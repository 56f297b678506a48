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

#include "cvrepeater/link_channels.h"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace cvrep {

namespace {

void require_span_transmissivity(double eta) {
    if (!(eta > 0.0 && eta <= 1.0)) {
        throw std::invalid_argument("span transmissivity must lie in (0, 1], got " + std::to_string(eta));
    }
}

}  // namespace

void LinkParams::validate() const {
    if (!(L_delta_km > 0.0) || !std::isfinite(L_delta_km)) {
        throw std::invalid_argument("inter-repeater spacing must be finite and > 0");
    }
    if (!(gamma_db_per_km > 0.0) || !std::isfinite(gamma_db_per_km)) {
        throw std::invalid_argument("attenuation must be finite and > 0");
    }
}

double LinkParams::eta() const {
    validate();
    return transmissivity(L_delta_km, gamma_db_per_km);
}

double transmissivity(double L_km, double gamma_db_per_km) {
    if (!(L_km >= 0.0) || !std::isfinite(L_km)) {
        throw std::invalid_argument("fiber length must be finite and >= 0, got " + std::to_string(L_km));
    }
    if (!(gamma_db_per_km >= 0.0) || !std::isfinite(gamma_db_per_km)) {
        throw std::invalid_argument("attenuation must be finite and >= 0");
    }
    return std::pow(10.0, -gamma_db_per_km * L_km / 10.0);
}

double sigma2_amplified(double eta) {
    require_span_transmissivity(eta);
    return 1.0 - eta;
}

double sigma2_teleport(double eta, SqueezeSpec s) {
    require_span_transmissivity(eta);
    const double arm = std::sqrt(eta);
    return arm * s.variance_factor() + (1.0 - arm);
}

double mirs(SqueezeSpec s, double gamma_db_per_km) {
    if (!(gamma_db_per_km > 0.0)) {
        throw std::invalid_argument("attenuation must be > 0");
    }
    if (s.value_db() <= 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    // σ²_T = σ²_A  <=>  √η = 1 − 10^(−s/10).
    return -(20.0 / gamma_db_per_km) * std::log10(1.0 - s.variance_factor());
}

}  // namespace cvrep
