// Copyright 2026 The decolab Authors
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

/**
 * @file
 * Single-mode truncated Fock space: ladder and quadrature operators, coherent
 * states, photon-counting and coherent-state measurement operators, and an
 * Ehrenfest check for the harmonic potential.
 *
 * The field is one mode. Multimode structure is out of scope.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdio>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "decolab/errors.hpp"
#include "decolab/measurement.hpp"
#include "decolab/oracle.hpp"
#include "decolab/state_algebra.hpp"

namespace decolab {

inline constexpr std::size_t kDefaultFockCutoff = 20;

/// Single-mode span of |0> ... |n_max> with operators represented on it. X and P are the
/// dimensionless quadratures (a + a^dagger)/sqrt 2 and i(a^dagger - a)/sqrt 2;
/// their commutator is i except on the top level.
class FockSpace {
 public:
  explicit FockSpace(std::size_t n_max = kDefaultFockCutoff) : n_max_(n_max) {
    if (n_max_ < 1) throw ArgumentError("FockSpace: n_max must be at least 1");
    if (n_max_ + 1 > kMaxDenseEvolutionDimension) throw SizeError("FockSpace: cutoff too large");
    const auto d = static_cast<Eigen::Index>(n_max_ + 1);
    a_ = CMatrix::Zero(d, d);
    for (Eigen::Index n = 1; n < d; ++n) a_(n - 1, n) = std::sqrt(static_cast<double>(n));
    const double s = 1.0 / std::sqrt(2.0);
    x_ = s * (a_ + a_.adjoint());
    p_ = cplx(0.0, s) * (a_.adjoint() - a_);
    number_ = a_.adjoint() * a_;
  }

  std::size_t n_max() const noexcept { return n_max_; }
  std::size_t dim() const noexcept { return n_max_ + 1; }
  const CMatrix& annihilation() const noexcept { return a_; }
  CMatrix creation() const { return a_.adjoint(); }
  const CMatrix& number() const noexcept { return number_; }
  const CMatrix& position() const noexcept { return x_; }
  const CMatrix& momentum() const noexcept { return p_; }

  StateVector fock_state(std::size_t n) const {
    if (n > n_max_) throw TruncationError("fock_state: n exceeds the cutoff");
    return StateVector::basis_state({dim()}, n);
  }

  StateVector vacuum() const { return fock_state(0); }

 private:
  std::size_t n_max_;
  CMatrix a_, x_, p_, number_;
};

inline double expectation(const CMatrix& op, const StateVector& psi) {
  return psi.amps().dot(op * psi.amps()).real();
}

/// <n|alpha> for n <= n_max, not renormalized.
inline CVector coherent_amplitudes(cplx alpha, const FockSpace& space) {
  CVector c(static_cast<Eigen::Index>(space.dim()));
  c(0) = std::exp(-0.5 * std::norm(alpha));
  for (Eigen::Index n = 1; n < c.size(); ++n) c(n) = c(n - 1) * alpha / std::sqrt(static_cast<double>(n));
  return c;
}

/// Probability mass of |alpha> above the cutoff.
inline double coherent_truncation_loss(cplx alpha, const FockSpace& space) {
  return std::max(0.0, 1.0 - coherent_amplitudes(alpha, space).squaredNorm());
}

/// |alpha> on the truncation, renormalized. Requires |alpha|^2 <= n_max / 4.
inline StateVector coherent_state(cplx alpha, const FockSpace& space) {
  // Relative slack so that |sqrt(x)|^2 rounding up does not trip the bound.
  if (std::norm(alpha) > static_cast<double>(space.n_max()) / 4.0 * (1.0 + 1e-12)) {
    throw TruncationError("coherent_state: |alpha|^2 = " + std::to_string(std::norm(alpha)) +
                          " exceeds n_max/4 = " + std::to_string(space.n_max() / 4.0));
  }
  return StateVector::normalized({space.dim()}, coherent_amplitudes(alpha, space));
}

/// M_n = |0><n| for n = 0 ... n_max.
inline KrausSet photon_counting_set(const FockSpace& space) {
  const auto d = static_cast<Eigen::Index>(space.dim());
  std::vector<CMatrix> ops;
  std::vector<std::string> labels;
  for (Eigen::Index n = 0; n < d; ++n) {
    CMatrix m = CMatrix::Zero(d, d);
    m(0, n) = 1.0;
    ops.push_back(std::move(m));
    labels.push_back(std::to_string(n));
  }
  return KrausSet(std::move(ops), std::move(labels));
}

// ---------------------------------------------------------------------------
// Coherent-state measurement
// ---------------------------------------------------------------------------

/// Points alpha_k in the disc |alpha| <= radius with area weights.
struct CoherentGrid {
  std::vector<cplx> points;
  std::vector<double> weights;
  double radius = 0.0;
};

inline constexpr std::size_t kDefaultRadialNodes = 64;
inline constexpr std::size_t kDefaultAngularNodes = 64;
inline constexpr double kDefaultGridRadius = 8.0;

/// Gauss-Legendre nodes and weights on [-1, 1] (Golub-Welsch).
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(std::size_t n) {
  if (n == 0) throw ArgumentError("gauss_legendre: need at least one node");
  const auto d = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(d, d);
  for (Eigen::Index k = 1; k < d; ++k) {
    const double kk = static_cast<double>(k);
    jac(k, k - 1) = jac(k - 1, k) = kk / std::sqrt(4.0 * kk * kk - 1.0);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
  std::vector<double> x(n), w(n);
  for (Eigen::Index k = 0; k < d; ++k) {
    x[static_cast<std::size_t>(k)] = es.eigenvalues()(k);
    const double v0 = es.eigenvectors()(0, k);
    w[static_cast<std::size_t>(k)] = 2.0 * v0 * v0;
  }
  return {x, w};
}

/// Polar grid: Gauss-Legendre in |alpha| on [0, radius], uniform in angle.
inline CoherentGrid polar_grid(double radius = kDefaultGridRadius,
                               std::size_t radial = kDefaultRadialNodes,
                               std::size_t angular = kDefaultAngularNodes) {
  if (!(radius > 0.0) || angular == 0) throw ArgumentError("polar_grid: bad radius or node count");
  const auto [x, w] = gauss_legendre(radial);
  CoherentGrid g;
  g.radius = radius;
  const double dphi = 2.0 * std::numbers::pi / static_cast<double>(angular);
  for (std::size_t i = 0; i < radial; ++i) {
    const double r = 0.5 * radius * (x[i] + 1.0);
    const double dr = 0.5 * radius * w[i];
    for (std::size_t k = 0; k < angular; ++k) {
      g.points.push_back(std::polar(r, dphi * static_cast<double>(k)));
      g.weights.push_back(r * dr * dphi);
    }
  }
  return g;
}

/// Discretized M_alpha = sqrt(dA/pi) |alpha'><alpha|P, where P projects onto
/// the truncation and |alpha'> is P|alpha> renormalized. Then
/// M^dagger M = (dA/pi) P|alpha><alpha|P and every post-state is |alpha'>.
/// Completeness is approximate; validate_kraus reports how close.
inline KrausSet coherent_measurement_set(const CoherentGrid& grid, const FockSpace& space) {
  if (grid.points.empty() || grid.points.size() != grid.weights.size()) {
    throw ArgumentError("coherent_measurement_set: grid points and weights must match");
  }
  if (grid.radius < 2.0 * std::sqrt(static_cast<double>(space.n_max()))) {
    throw ArgumentError("coherent_measurement_set: grid radius must be at least 2 sqrt(n_max)");
  }
  std::vector<CMatrix> ops;
  std::vector<std::string> labels;
  ops.reserve(grid.points.size());
  for (std::size_t k = 0; k < grid.points.size(); ++k) {
    const double w = grid.weights[k];
    if (!(w > 0.0)) throw ArgumentError("coherent_measurement_set: weights must be positive");
    if (std::abs(grid.points[k]) > grid.radius + 1e-12) {
      throw ArgumentError("coherent_measurement_set: point outside the declared radius");
    }
    const CVector v = coherent_amplitudes(grid.points[k], space);
    const double n = v.norm();
    ops.push_back(n > 0.0 ? CMatrix(std::sqrt(w / std::numbers::pi) * (v / n) * v.adjoint())
                          : CMatrix(CMatrix::Zero(v.size(), v.size())));
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g%+.17gi", grid.points[k].real(), grid.points[k].imag());
    labels.emplace_back(buf);
  }
  return KrausSet(std::move(ops), std::move(labels));
}

// ---------------------------------------------------------------------------
// Ehrenfest relation in a harmonic potential
// ---------------------------------------------------------------------------

/// Weight the initial state may carry on levels n >= n_max / 2.
inline constexpr double kSupportTolerance = 1e-6;

struct EhrenfestReport {
  double max_residual = 0.0;  ///< max_j |d<p>/dt + m w^2 <x>| over interior samples
  double step = 0.0;
  std::size_t samples = 0;
  std::vector<double> times;
  std::vector<double> mean_x;
  std::vector<double> mean_p;
};

/// Evolves `initial` under H = p^2/2m + m w^2 x^2 / 2 on the truncation and
/// compares the centered difference of <p> with -<dPhi/dx> = -m w^2 <x>.
/// `t_grid` must be uniformly spaced with at least three samples.
inline EhrenfestReport ehrenfest_check(const FockSpace& space, const StateVector& initial, double omega,
                                       double mass, const std::vector<double>& t_grid) {
  if (initial.dim() != space.dim()) throw ArgumentError("ehrenfest_check: state dimension mismatch");
  if (!(omega > 0.0) || !(mass > 0.0)) throw ArgumentError("ehrenfest_check: omega and mass must be positive");
  if (t_grid.size() < 3) throw ArgumentError("ehrenfest_check: need at least three time samples");
  const double step = t_grid[1] - t_grid[0];
  if (!(step > 0.0)) throw ArgumentError("ehrenfest_check: time grid must increase");
  for (std::size_t j = 1; j < t_grid.size(); ++j) {
    if (std::abs((t_grid[j] - t_grid[j - 1]) - step) > 1e-9 * step + 1e-15) {
      throw ArgumentError("ehrenfest_check: time grid must be uniform");
    }
  }
  double high = 0.0;
  for (std::size_t n = (space.n_max() + 1) / 2; n < space.dim(); ++n) high += std::norm(initial[n]);
  if (high > kSupportTolerance) {
    throw TruncationError("ehrenfest_check: initial state has weight " + std::to_string(high) +
                          " at or above n_max/2");
  }

  const double scale = std::sqrt(mass * omega);
  const CMatrix x = space.position() / scale;
  const CMatrix p = space.momentum() * scale;
  const CMatrix h = p * p / (2.0 * mass) + 0.5 * mass * omega * omega * x * x;
  const DenseEvolver evolver(h);

  EhrenfestReport rep;
  rep.step = step;
  rep.samples = t_grid.size();
  rep.times = t_grid;
  for (double t : t_grid) {
    const auto psi = evolver.evolve(initial, t);
    rep.mean_x.push_back(expectation(x, psi));
    rep.mean_p.push_back(expectation(p, psi));
  }
  const double k = mass * omega * omega;
  for (std::size_t j = 1; j + 1 < t_grid.size(); ++j) {
    const double dp = (rep.mean_p[j + 1] - rep.mean_p[j - 1]) / (2.0 * step);
    rep.max_residual = std::max(rep.max_residual, std::abs(dp + k * rep.mean_x[j]));
  }
  return rep;
}

}  // namespace decolab
