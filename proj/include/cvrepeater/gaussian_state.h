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

#ifndef CVREPEATER_GAUSSIAN_STATE_H
#define CVREPEATER_GAUSSIAN_STATE_H

#include <Eigen/Dense>
#include <cstddef>
#include <utility>

namespace cvrep {

/// Squeezing level in dB. A value of x dB means the squeezed quadrature
/// variance is (1/2)·10^(−x/10). +infinity is allowed and denotes the
/// infinite-squeezing limit.
class SqueezeSpec {
   public:
    SqueezeSpec() = default;
    explicit SqueezeSpec(double value_db);

    static SqueezeSpec infinite();

    double value_db() const {
        return value_db_;
    }
    bool is_infinite() const;

    /// 10^(−x/10), in [0, 1]; exactly 0 for infinite squeezing.
    double variance_factor() const;

    /// Natural squeezing parameter r̃ with e^(−2r̃) = 10^(−x/10).
    double natural() const;

   private:
    double value_db_ = 0.0;
};

/// Zero-mean Gaussian state in quadrature ordering (q1, p1, q2, p2, ...),
/// vacuum variance 1/2. Construction validates symmetry and the uncertainty
/// principle; every instance is physical.
class GaussianState {
   public:
    static constexpr double kSymmetryTolerance = 1e-12;
    static constexpr double kSymplecticTolerance = 1e-9;
    static constexpr std::size_t kMaxModes = 4;

    explicit GaussianState(Eigen::MatrixXd cov);

    static GaussianState vacuum(std::size_t n_modes);
    static GaussianState thermal(double mean_photons);

    std::size_t n_modes() const {
        return static_cast<std::size_t>(cov_.rows() / 2);
    }
    const Eigen::MatrixXd &cov() const {
        return cov_;
    }

    /// Symplectic eigenvalues in ascending order (n values, each >= 1/2).
    Eigen::VectorXd symplectic_eigenvalues() const;

   private:
    Eigen::MatrixXd cov_;
};

/// Standard symplectic form ⊕ [[0, 1], [−1, 0]] on n modes.
Eigen::MatrixXd symplectic_form(std::size_t n_modes);

/// Symplectic eigenvalues of a symmetric positive-definite covariance.
Eigen::VectorXd symplectic_eigenvalues(const Eigen::MatrixXd &cov);

GaussianState tmsv_state(SqueezeSpec r);
/// TMSV with natural squeezing parameter r̃ (mean photons sinh²r̃ per arm).
GaussianState tmsv_state_natural(double r_natural);
/// TMSV whose arms each carry `mean_photons` photons.
GaussianState tmsv_with_mean_photons(double mean_photons);

GaussianState apply_loss(const GaussianState &state, std::size_t mode, double eta);
GaussianState apply_amplifier(const GaussianState &state, std::size_t mode, double gain);
GaussianState apply_additive_noise(const GaussianState &state, std::size_t mode, double variance);
/// Two-mode squeezing gate with gain G = cosh²g, g = ln(√G + √(G−1)).
GaussianState apply_tms_gate(const GaussianState &state, std::pair<std::size_t, std::size_t> modes, double gain);
GaussianState apply_inverse_tms_gate(
    const GaussianState &state, std::pair<std::size_t, std::size_t> modes, double gain);

/// Uhlmann fidelity (Tr√(√a·b·√a))² between zero-mean Gaussian states.
double uhlmann_fidelity(const GaussianState &a, const GaussianState &b);

/// Tr(a^s · b^(1−s)) for zero-mean Gaussian states, s in (0, 1).
double gaussian_overlap(const GaussianState &a, const GaussianState &b, double s);

}  // namespace cvrep

#endif
