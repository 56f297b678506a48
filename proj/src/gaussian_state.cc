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

#include "cvrepeater/gaussian_state.h"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

#include "cvrepeater/errors.h"

namespace cvrep {

namespace {

constexpr double kPureTolerance = 1e-10;

void require_mode(const GaussianState &state, std::size_t mode) {
    if (mode >= state.n_modes()) {
        throw std::invalid_argument(
            "mode index " + std::to_string(mode) + " out of range for a " + std::to_string(state.n_modes()) +
            "-mode state");
    }
}

// Applies a single-mode Gaussian channel V -> x·V + y·I on `mode`, scaling the
// cross blocks by √x.
GaussianState single_mode_channel(const GaussianState &state, std::size_t mode, double x, double y) {
    Eigen::MatrixXd cov = state.cov();
    const Eigen::Index b = static_cast<Eigen::Index>(2 * mode);
    const double root = std::sqrt(x);
    for (Eigen::Index j = 0; j < cov.cols(); ++j) {
        if (j == b || j == b + 1) {
            continue;
        }
        cov(b, j) *= root;
        cov(b + 1, j) *= root;
        cov(j, b) *= root;
        cov(j, b + 1) *= root;
    }
    cov.block(b, b, 2, 2) = x * cov.block(b, b, 2, 2) + y * Eigen::Matrix2d::Identity();
    return GaussianState(std::move(cov));
}

Eigen::MatrixXd tms_symplectic(std::size_t n_modes, std::size_t i, std::size_t j, double gain, bool inverse) {
    const double c = std::sqrt(gain);
    const double s = (inverse ? -1.0 : 1.0) * std::sqrt(gain - 1.0);
    Eigen::MatrixXd S = Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes);
    const Eigen::Index a = static_cast<Eigen::Index>(2 * i);
    const Eigen::Index b = static_cast<Eigen::Index>(2 * j);
    S(a, a) = c;
    S(a + 1, a + 1) = c;
    S(b, b) = c;
    S(b + 1, b + 1) = c;
    // q_i -> c·q_i + s·q_j, p_i -> c·p_i − s·p_j (and symmetrically for j).
    S(a, b) = s;
    S(a + 1, b + 1) = -s;
    S(b, a) = s;
    S(b + 1, a + 1) = -s;
    return S;
}

GaussianState tms_gate(
    const GaussianState &state, std::pair<std::size_t, std::size_t> modes, double gain, bool inverse) {
    if (!(gain >= 1.0) || !std::isfinite(gain)) {
        throw std::invalid_argument("TMS gain must be finite and >= 1, got " + std::to_string(gain));
    }
    require_mode(state, modes.first);
    require_mode(state, modes.second);
    if (modes.first == modes.second) {
        throw std::invalid_argument("TMS gate needs two distinct modes");
    }
    const Eigen::MatrixXd S = tms_symplectic(state.n_modes(), modes.first, modes.second, gain, inverse);
    Eigen::MatrixXd cov = S * state.cov() * S.transpose();
    cov = 0.5 * (cov + cov.transpose());
    return GaussianState(std::move(cov));
}

// Λ_p(ν) and G_p(ν) of the Pirandola–Lloyd overlap formula, vacuum ν = 1.
double big_lambda(double p, double nu) {
    const double up = std::pow(nu + 1.0, p);
    const double down = std::pow(nu - 1.0, p);
    return (up + down) / (up - down);
}

double big_g(double p, double nu) {
    return std::pow(2.0, p) / (std::pow(nu + 1.0, p) - std::pow(nu - 1.0, p));
}

// S·Λ_p(D)·Sᵀ for W = S·D·Sᵀ (vacuum-1 units), computed as u(A²)·W with
// A = W·(iΩ) and u(ν²) = Λ_p(ν)/ν.
Eigen::MatrixXd williamson_power_term(const Eigen::MatrixXd &W, const Eigen::MatrixXd &omega, double p) {
    const Eigen::MatrixXd WO = W * omega;
    const Eigen::MatrixXd A2 = -(WO * WO);
    Eigen::EigenSolver<Eigen::MatrixXd> es(A2);
    if (es.info() != Eigen::Success) {
        throw NumericalError("eigen decomposition failed in gaussian_overlap");
    }
    const Eigen::VectorXcd values = es.eigenvalues();
    const Eigen::MatrixXcd vectors = es.eigenvectors();
    Eigen::VectorXcd u(values.size());
    for (Eigen::Index k = 0; k < values.size(); ++k) {
        const double nu = std::sqrt(std::max(values[k].real(), 1.0));
        u[k] = big_lambda(p, nu) / nu;
    }
    const Eigen::MatrixXcd f = vectors * u.asDiagonal() * vectors.inverse();
    return f.real() * W;
}

}  // namespace

SqueezeSpec::SqueezeSpec(double value_db) : value_db_(value_db) {
    if (std::isnan(value_db) || value_db < 0.0) {
        throw std::invalid_argument("squeezing must be >= 0 dB, got " + std::to_string(value_db));
    }
}

SqueezeSpec SqueezeSpec::infinite() {
    return SqueezeSpec(std::numeric_limits<double>::infinity());
}

bool SqueezeSpec::is_infinite() const {
    return std::isinf(value_db_);
}

double SqueezeSpec::variance_factor() const {
    if (is_infinite()) {
        return 0.0;
    }
    return std::pow(10.0, -value_db_ / 10.0);
}

double SqueezeSpec::natural() const {
    return value_db_ * std::log(10.0) / 20.0;
}

GaussianState::GaussianState(Eigen::MatrixXd cov) : cov_(std::move(cov)) {
    if (cov_.rows() != cov_.cols() || cov_.rows() == 0 || cov_.rows() % 2 != 0) {
        throw std::invalid_argument("covariance must be a non-empty 2n x 2n matrix");
    }
    if (static_cast<std::size_t>(cov_.rows() / 2) > kMaxModes) {
        throw std::invalid_argument("at most 4 modes are supported");
    }
    if (!cov_.allFinite()) {
        throw std::invalid_argument("covariance has non-finite entries");
    }
    const double scale = std::max(1.0, cov_.cwiseAbs().maxCoeff());
    if ((cov_ - cov_.transpose()).cwiseAbs().maxCoeff() > kSymmetryTolerance * scale) {
        throw std::invalid_argument("covariance is not symmetric");
    }
    cov_ = 0.5 * (cov_ + cov_.transpose());
    Eigen::LLT<Eigen::MatrixXd> llt(cov_);
    if (llt.info() != Eigen::Success) {
        throw std::invalid_argument("covariance is not positive definite");
    }
    const Eigen::VectorXd nu = cvrep::symplectic_eigenvalues(cov_);
    if (nu.minCoeff() < 0.5 - kSymplecticTolerance) {
        throw std::invalid_argument(
            "covariance violates the uncertainty principle (symplectic eigenvalue " +
            std::to_string(nu.minCoeff()) + " < 1/2)");
    }
}

GaussianState GaussianState::vacuum(std::size_t n_modes) {
    const auto dim = static_cast<Eigen::Index>(2 * n_modes);
    return GaussianState(0.5 * Eigen::MatrixXd::Identity(dim, dim));
}

GaussianState GaussianState::thermal(double mean_photons) {
    if (!(mean_photons >= 0.0) || !std::isfinite(mean_photons)) {
        throw std::invalid_argument("thermal mean photon number must be finite and >= 0");
    }
    return GaussianState((mean_photons + 0.5) * Eigen::MatrixXd::Identity(2, 2));
}

Eigen::VectorXd GaussianState::symplectic_eigenvalues() const {
    return cvrep::symplectic_eigenvalues(cov_);
}

Eigen::MatrixXd symplectic_form(std::size_t n_modes) {
    const auto dim = static_cast<Eigen::Index>(2 * n_modes);
    Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(dim, dim);
    for (Eigen::Index k = 0; k < dim; k += 2) {
        omega(k, k + 1) = 1.0;
        omega(k + 1, k) = -1.0;
    }
    return omega;
}

Eigen::VectorXd symplectic_eigenvalues(const Eigen::MatrixXd &cov) {
    // Eigenvalues of the Hermitian matrix i·V^½ΩV^½ are ±ν_k.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> sqrt_solver(cov);
    const Eigen::MatrixXd root = sqrt_solver.operatorSqrt();
    const Eigen::MatrixXd m = root * symplectic_form(static_cast<std::size_t>(cov.rows() / 2)) * root;
    const Eigen::MatrixXcd h = std::complex<double>(0.0, 1.0) * m.cast<std::complex<double>>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("symplectic eigenvalue decomposition failed");
    }
    const Eigen::VectorXd all = solver.eigenvalues();  // ascending
    const Eigen::Index n = all.size() / 2;
    Eigen::VectorXd nu(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        nu[k] = all[n + k];
    }
    return nu;
}

GaussianState tmsv_state(SqueezeSpec r) {
    if (r.is_infinite()) {
        throw std::invalid_argument("TMSV squeezing must be finite");
    }
    return tmsv_state_natural(r.natural());
}

GaussianState tmsv_state_natural(double r_natural) {
    if (!std::isfinite(r_natural)) {
        throw std::invalid_argument("TMSV squeezing must be finite");
    }
    const double diag = 0.5 * std::cosh(2.0 * r_natural);
    const double off = 0.5 * std::sinh(2.0 * r_natural);
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(4, 4);
    cov(0, 0) = cov(1, 1) = cov(2, 2) = cov(3, 3) = diag;
    cov(0, 2) = cov(2, 0) = off;
    cov(1, 3) = cov(3, 1) = -off;
    return GaussianState(std::move(cov));
}

GaussianState tmsv_with_mean_photons(double mean_photons) {
    if (!(mean_photons >= 0.0) || !std::isfinite(mean_photons)) {
        throw std::invalid_argument("TMSV mean photon number must be finite and >= 0");
    }
    return tmsv_state_natural(std::asinh(std::sqrt(mean_photons)));
}

GaussianState apply_loss(const GaussianState &state, std::size_t mode, double eta) {
    if (!(eta >= 0.0 && eta <= 1.0)) {
        throw std::invalid_argument("loss transmissivity must lie in [0, 1], got " + std::to_string(eta));
    }
    require_mode(state, mode);
    return single_mode_channel(state, mode, eta, 0.5 * (1.0 - eta));
}

GaussianState apply_amplifier(const GaussianState &state, std::size_t mode, double gain) {
    if (!(gain >= 1.0) || !std::isfinite(gain)) {
        throw std::invalid_argument("amplifier gain must be finite and >= 1, got " + std::to_string(gain));
    }
    require_mode(state, mode);
    return single_mode_channel(state, mode, gain, 0.5 * (gain - 1.0));
}

GaussianState apply_additive_noise(const GaussianState &state, std::size_t mode, double variance) {
    if (!(variance >= 0.0) || !std::isfinite(variance)) {
        throw std::invalid_argument("additive noise variance must be finite and >= 0");
    }
    require_mode(state, mode);
    return single_mode_channel(state, mode, 1.0, variance);
}

GaussianState apply_tms_gate(const GaussianState &state, std::pair<std::size_t, std::size_t> modes, double gain) {
    return tms_gate(state, modes, gain, false);
}

GaussianState apply_inverse_tms_gate(
    const GaussianState &state, std::pair<std::size_t, std::size_t> modes, double gain) {
    return tms_gate(state, modes, gain, true);
}

double uhlmann_fidelity(const GaussianState &a, const GaussianState &b) {
    if (a.n_modes() != b.n_modes()) {
        throw std::invalid_argument("fidelity needs states with equal mode counts");
    }
    const Eigen::MatrixXd omega = symplectic_form(a.n_modes());
    const Eigen::MatrixXd sum = a.cov() + b.cov();
    // With a pure argument F = 1/√det(V_a + V_b) exactly. The general product
    // below turns rounding in λ² ≈ 1/4 into √ε errors, so take this branch.
    auto is_pure = [](const GaussianState &s) {
        return (s.symplectic_eigenvalues().array() - 0.5).abs().maxCoeff() < kPureTolerance;
    };
    if (is_pure(a) || is_pure(b)) {
        return std::clamp(1.0 / std::sqrt(sum.determinant()), 0.0, 1.0);
    }
    const Eigen::MatrixXd aux =
        omega.transpose() * sum.inverse() * (0.25 * omega + b.cov() * omega * a.cov());
    const Eigen::MatrixXd ao = aux * omega;
    // Eigenvalues of (aux·Ω)² are −λ² with λ >= 1/2 for physical pairs.
    Eigen::EigenSolver<Eigen::MatrixXd> es(ao * ao, false);
    if (es.info() != Eigen::Success) {
        throw NumericalError("eigen decomposition failed in uhlmann_fidelity");
    }
    double log_root = 0.0;
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
        const double lambda2 = std::max(-es.eigenvalues()[k].real(), 0.25);
        const double lambda = std::sqrt(lambda2);
        log_root += 0.5 * std::log(2.0 * lambda + std::sqrt(std::max(4.0 * lambda2 - 1.0, 0.0)));
    }
    const double fidelity = std::exp(log_root - 0.5 * std::log(sum.determinant()));
    if (!std::isfinite(fidelity)) {
        throw NumericalError("non-finite fidelity");
    }
    return std::clamp(fidelity, 0.0, 1.0);
}

double gaussian_overlap(const GaussianState &a, const GaussianState &b, double s) {
    if (a.n_modes() != b.n_modes()) {
        throw std::invalid_argument("overlap needs states with equal mode counts");
    }
    if (!(s > 0.0 && s < 1.0)) {
        throw std::invalid_argument("overlap exponent must lie in (0, 1)");
    }
    const std::size_t n = a.n_modes();
    const Eigen::MatrixXd omega = symplectic_form(n);
    const Eigen::MatrixXd wa = 2.0 * a.cov();
    const Eigen::MatrixXd wb = 2.0 * b.cov();
    double log_det_pi = 0.0;
    for (double nu : symplectic_eigenvalues(wa)) {
        log_det_pi += 2.0 * std::log(big_g(s, std::max(nu, 1.0)));
    }
    for (double nu : symplectic_eigenvalues(wb)) {
        log_det_pi += 2.0 * std::log(big_g(1.0 - s, std::max(nu, 1.0)));
    }
    const Eigen::MatrixXd sigma = williamson_power_term(wa, omega, s) + williamson_power_term(wb, omega, 1.0 - s);
    const double det_sigma = sigma.determinant();
    if (!(det_sigma > 0.0)) {
        throw NumericalError("non-positive determinant in gaussian_overlap");
    }
    return std::exp(static_cast<double>(n) * std::log(2.0) + 0.5 * log_det_pi - 0.5 * std::log(det_sigma));
}

}  // namespace cvrep
