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

#ifndef CVREPEATER_LINK_CHANNELS_H
#define CVREPEATER_LINK_CHANNELS_H

#include "cvrepeater/gaussian_state.h"

namespace cvrep {

inline constexpr double kDefaultAttenuationDbPerKm = 0.2;

/// One inter-node fiber span.
struct LinkParams {
    double L_delta_km = 1.0;
    double gamma_db_per_km = kDefaultAttenuationDbPerKm;
    SqueezeSpec s_tele;

    /// Throws std::invalid_argument unless L_delta_km > 0 and gamma > 0.
    void validate() const;
    double eta() const;
};

/// 10^(−γL/10).
double transmissivity(double L_km, double gamma_db_per_km = kDefaultAttenuationDbPerKm);

/// Additive noise of a gain-1/η amplifier followed by loss η: 1 − η.
double sigma2_amplified(double eta);

/// Additive noise of teleportation over a span of transmissivity η with the
/// TMSV source mid-span (each arm sees √η): √η·10^(−s/10) + 1 − √η.
double sigma2_teleport(double eta, SqueezeSpec s);

/// Minimal inter-repeater spacing L*: teleportation beats amplification for
/// every spacing above it. Returns +inf for s = 0 dB and 0 for infinite s.
double mirs(SqueezeSpec s, double gamma_db_per_km = kDefaultAttenuationDbPerKm);

}  // namespace cvrep

#endif
