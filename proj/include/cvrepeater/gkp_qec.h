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

#ifndef CVREPEATER_GKP_QEC_H
#define CVREPEATER_GKP_QEC_H

#include <cstddef>
#include <optional>
#include <vector>

#include "cvrepeater/gaussian_state.h"
#include "cvrepeater/link_channels.h"

namespace cvrep {

/// Period of the GKP lattice, √(2π).
double gkp_period();

/// Per-quadrature additive displacement variances.
struct NoiseBudget {
    double variance_q = 0.0;
    double variance_p = 0.0;

    static NoiseBudget symmetric(double variance);
    /// The common variance; throws if the quadratures disagree.
    double variance() const;
};

/// Approximate GKP ancilla with tooth squeezing s^(G) = −10·log10(2σ_G²).
struct GkpParams {
    SqueezeSpec s_gkp = SqueezeSpec::infinite();

    double sigma_G() const;
    double sigma_G2() const;
};

/// Repeater-chain geometry and code settings.
struct CodeParams {
    /// Fixed TMS gain for every layer; nullopt re-optimizes each layer.
    std::optional<double> gain;
    int k = 1;
    double L_km = 1.0;
    double L_delta_km = 1.0;

    /// L / L_Δ; throws std::invalid_argument unless it is a positive integer.
    long segments() const;
    long relays() const {
        return segments() - 1;
    }
};

enum class ChannelKind { amplified, teleport, direct };

/// What a distributed idler experiences end to end: nothing, pure loss, or
/// Gaussian additive displacement noise.
struct IdlerChannel {
    enum class Kind { identity, pure_loss, additive };

    Kind kind = Kind::identity;
    double transmissivity = 1.0;
    NoiseBudget noise;

    static IdlerChannel identity();
    static IdlerChannel pure_loss(double eta);
    static IdlerChannel additive(NoiseBudget noise);

    GaussianState apply(const GaussianState &state, std::size_t mode) const;
};

/// x − period·floor(x/period + 1/2), in [−period/2, period/2).
double centered_mod(double x, double period);

/// Multiplier applied to the wrapped syndrome:
/// −2√(G(G−1))·σ² / ((2G−1)σ² + 2σ_G²).
double mvue_coefficient(double gain, double sigma2, double sigma_G);

/// Residual displacement variance Σ²_Q[σ²] of one GKP-TMS round with gain G.
/// Evaluates the exact erfc-window series; throws NumericalError if the
/// series needs more than its term budget.
double logical_noise_variance(double sigma2, double gain, const GkpParams &gkp);

struct GainOptimum {
    double gain = 1.0;
    double sigma2_logical = 0.0;
    /// Objective varies by less than kFlatTolerance over the scanned gains.
    bool flat = false;

    static constexpr double kFlatTolerance = 1e-12;
};

/// argmin over G >= 1 of logical_noise_variance. Coarse scan on [1, 20] at
/// step 0.25 (extended geometrically if the minimum sits on the edge), then
/// golden-section refinement to 1e-6 in G.
GainOptimum optimize_gain(double sigma2, const GkpParams &gkp);

/// v_0 = σ², v_{i+1} = min_G Σ²_Q[v_i]; returns v_k.
double multilayer_noise(double sigma2_physical, int k, const GkpParams &gkp);

/// {v_1, ..., v_k} of the same recursion.
std::vector<double> multilayer_trajectory(double sigma2_physical, int k, const GkpParams &gkp);

/// Per-segment physical noise of the chosen inter-node channel.
double segment_physical_noise(const LinkParams &link, ChannelKind kind);

/// Idler channel from Alice to Bob. Amplified/teleport chains accumulate
/// (L/L_Δ)·v_k; the direct kind is a single pure-loss span of length L.
IdlerChannel end_to_end_noise(const LinkParams &link, const CodeParams &code, const GkpParams &gkp, ChannelKind kind);

/// Smallest n_cut accepted by gkp_wigner: ceil(3/σ_G).
int gkp_wigner_min_cut(const GkpParams &gkp);

/// Normalized Wigner function of the approximate GKP state
/// Σ_n e^(−πσ_G²n²) ∫ e^(−(q−n√2π)²/2σ_G²)|q⟩dq with |n| <= n_cut.
double gkp_wigner(double q, double p, const GkpParams &gkp, int n_cut);

}  // namespace cvrep

#endif
