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
 * Brute-force Schrodinger evolution on the full joint space. Nothing here
 * calls into the closed-form spin-bath engine; it is the ground truth that
 * engine is checked against.
 */

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "decolab/errors.hpp"
#include "decolab/spin_bath.hpp"
#include "decolab/state_algebra.hpp"

namespace decolab {

/// Largest dimension accepted by evolve_dense.
inline constexpr std::size_t kMaxDenseEvolutionDimension = std::size_t{1} << 12;
/// Largest environment handled by oracle_r (joint dimension 2^15).
inline constexpr std::size_t kMaxOracleSpins = 14;

/// Hamiltonian that is diagonal in the computational product basis.
class DiagonalHamiltonian {
 public:
  DiagonalHamiltonian(Dims dims, std::vector<double> energies)
      : dims_(std::move(dims)), energies_(std::move(energies)) {
    if (detail::checked_product(dims_) != energies_.size()) {
      throw ArgumentError("DiagonalHamiltonian: energy count does not match dims");
    }
  }

  const Dims& dims() const noexcept { return dims_; }
  const std::vector<double>& energies() const noexcept { return energies_; }

 private:
  Dims dims_;
  std::vector<double> energies_;
};

/// psi_j -> exp(-i E_j t) psi_j.
inline StateVector evolve_diagonal(const DiagonalHamiltonian& h, const StateVector& psi0, double t) {
  if (h.dims() != psi0.dims()) throw ArgumentError("evolve_diagonal: dims mismatch");
  const auto& e = h.energies();
  CVector out(psi0.amps().size());
  for (Eigen::Index j = 0; j < out.size(); ++j) {
    out(j) = psi0.amps()(j) * std::polar(1.0, -e[static_cast<std::size_t>(j)] * t);
  }
  return StateVector(psi0.dims(), std::move(out));
}

/// exp(-i H t) through one eigendecomposition of H, reused for every t.
class DenseEvolver {
 public:
  explicit DenseEvolver(const CMatrix& h) {
    if (h.rows() != h.cols() || h.rows() == 0) throw ArgumentError("evolve_dense: H must be square");
    if (static_cast<std::size_t>(h.rows()) > kMaxDenseEvolutionDimension) {
      throw SizeError("evolve_dense: dimension " + std::to_string(h.rows()) + " exceeds 2^12");
    }
    if (detail::max_abs(h - h.adjoint()) > 1e-10) {
      throw ArgumentError("evolve_dense: H is not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(detail::hermitian_part(h));
    if (es.info() != Eigen::Success) throw ArgumentError("evolve_dense: eigensolver failed");
    energies_ = es.eigenvalues();
    vectors_ = es.eigenvectors();
  }

  std::size_t dim() const noexcept { return static_cast<std::size_t>(vectors_.rows()); }

  StateVector evolve(const StateVector& psi0, double t) const {
    if (psi0.dim() != dim()) throw ArgumentError("evolve_dense: dimension mismatch");
    CVector coeffs = vectors_.adjoint() * psi0.amps();
    for (Eigen::Index j = 0; j < coeffs.size(); ++j) coeffs(j) *= std::polar(1.0, -energies_(j) * t);
    return StateVector::normalized(psi0.dims(), vectors_ * coeffs);
  }

  CMatrix propagator(double t) const {
    CVector phases(energies_.size());
    for (Eigen::Index j = 0; j < phases.size(); ++j) phases(j) = std::polar(1.0, -energies_(j) * t);
    return vectors_ * phases.asDiagonal() * vectors_.adjoint();
  }

 private:
  Eigen::VectorXd energies_;
  CMatrix vectors_;
};

inline StateVector evolve_dense(const CMatrix& h, const StateVector& psi0, double t) {
  return DenseEvolver(h).evolve(psi0, t);
}

/// Coupling Hamiltonian of a SpinBathConfig on the joint space A (x) E_1 ... E_N
/// (all qubits, A first), diagonal in the sigma_z product basis:
///
///   H = - sigma_z^A (x) sum_k g_k sigma_z^k.
///
/// This normalization produces the branch phases e^{+-i g_k t} and therefore
/// the cos 2 g_k t factors of the decoherence factor.
inline DiagonalHamiltonian spin_bath_hamiltonian(const SpinBathConfig& cfg) {
  const std::size_t n = cfg.size();
  if (n > kMaxOracleSpins) {
    throw SizeError("oracle: N = " + std::to_string(n) + " exceeds the oracle cap of " +
                    std::to_string(kMaxOracleSpins));
  }
  const std::size_t total = std::size_t{1} << (n + 1);
  std::vector<double> energies(total);
  for (std::size_t idx = 0; idx < total; ++idx) {
    // Qubit 0 (A) is the most significant bit; bit value 0 is sigma_z = +1.
    const double sa = ((idx >> n) & 1U) ? -1.0 : 1.0;
    double field = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double sk = ((idx >> (n - 1 - k)) & 1U) ? -1.0 : 1.0;
      field += cfg.spins()[k].coupling * sk;
    }
    energies[idx] = -sa * field;
  }
  return DiagonalHamiltonian(Dims(n + 1, 2), std::move(energies));
}

/// Psi(0) = (a|U> + b|D>) (x) prod_k (alpha_k|u> + beta_k|d>).
inline StateVector spin_bath_initial_state(const SpinBathConfig& cfg) {
  StateVector psi = StateVector::qubit(cfg.a(), cfg.b());
  for (const auto& s : cfg.spins()) psi = tensor(psi, StateVector::qubit(s.up, s.down));
  return psi;
}

/// Reduced state of A after explicit evolution of the joint state.
inline DensityMatrix oracle_reduced_state(const SpinBathConfig& cfg, double t) {
  const auto h = spin_bath_hamiltonian(cfg);
  const auto psi = evolve_diagonal(h, spin_bath_initial_state(cfg), t);
  return partial_trace(psi, {0});
}

/// rho_A(t)_{UD} / (a b*) from explicit evolution.
inline cplx oracle_r(const SpinBathConfig& cfg, double t) {
  const cplx ab = cfg.a() * std::conj(cfg.b());
  if (std::abs(ab) < 1e-14) {
    throw UndefinedRatioError("oracle_r: a or b is zero; compare reduced states instead");
  }
  return oracle_reduced_state(cfg, t)(0, 1) / ab;
}

}  // namespace decolab
