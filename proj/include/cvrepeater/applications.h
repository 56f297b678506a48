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

#ifndef CVREPEATER_APPLICATIONS_H
#define CVREPEATER_APPLICATIONS_H

#include <string>
#include <vector>

#include "cvrepeater/gaussian_state.h"
#include "cvrepeater/gkp_qec.h"
#include "cvrepeater/link_channels.h"

namespace cvrep {

/// Signal/background settings shared by EA communication and illumination.
struct CommParams {
    double N_S = 0.01;
    double N_B = 20.0;
    double kappa = 0.01;
    long M = 1;

    void validate() const;
};

/// Human-readable notes when the parameters leave the κ ≪ 1, N_B ≫ 1
/// regime the asymptotic formulas assume. Empty inside the regime.
std::vector<std::string> regime_warnings(const CommParams &p);

/// Thermal entropy in bits: (x+1)log2(x+1) − x·log2(x), g(0) = 0.
double gordon_g(double x);

/// g(κN_S + N_B) − g(N_B).
double classical_capacity(const CommParams &p);

/// Asymptotic EA Holevo information over classical capacity (natural log).
/// The idler channel selects the expression: identity = ideal preshared
/// TMSV, pure_loss = direct distribution, additive = QEC teleportation.
double holevo_ratio(const CommParams &p, const IdlerChannel &idler);

/// Signal (mode 0) and idler (mode 1) under "target absent" and "target
/// present". The return mode carries N_B background photons in both cases.
struct QiHypotheses {
    GaussianState absent;
    GaussianState present;
};

QiHypotheses qi_hypotheses(const CommParams &p, const IdlerChannel &idler_storage);

struct ChernoffBound {
    /// min over s of Tr(ρ0^s ρ1^(1−s)).
    double overlap = 1.0;
    double s_opt = 0.5;
    /// −ln(overlap): the per-mode error exponent.
    double exponent() const;
};

ChernoffBound quantum_chernoff(const GaussianState &a, const GaussianState &b);

/// (1/2)·min_s Q_s^M for QI with the given idler storage.
double qi_error_bound(const CommParams &p, const IdlerChannel &idler_storage);
double qi_error_bound(const ChernoffBound &bound, long M);

/// Coherent-state benchmark exponent per mode: κN_S(√(N_B+1) − √N_B)².
double ci_exponent(const CommParams &p);
double ci_error_bound(const CommParams &p);

/// −(1/2)·log2[e²ε(1+ε)/4]; negative above the security threshold.
double qkd_skr(double epsilon);
/// max(0, qkd_skr(ε)).
double qkd_secure_rate(double epsilon);
/// Root of ε² + ε − 4/e² = 0.
double qkd_noise_threshold();

/// Largest L = N·L_Δ with qkd_skr > 0 over a k-layer QEC teleportation
/// chain; 0 if even one segment is insecure.
double max_secure_distance(const LinkParams &link, const GkpParams &gkp, int k);

/// Repeaterless key-rate bound −log2(1 − η) for η in (0, 1).
double plob_bound(double eta);

}  // namespace cvrep

#endif
