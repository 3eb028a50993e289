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
 * Dense finite-dimensional Hilbert-space primitives: state vectors, density
 * matrices, orthonormal bases, tensor products and partial traces.
 *
 * Composite spaces are ordered with subsystem 0 most significant, so the
 * amplitude index of |i_0 i_1 ... i_{n-1}> is the row-major flattening of
 * (i_0, ..., i_{n-1}) over the subsystem dimensions. This matches the
 * Kronecker product convention used by tensor().
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "decolab/errors.hpp"

namespace decolab {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using Dims = std::vector<std::size_t>;

inline constexpr std::size_t kMaxDimension = std::size_t{1} << 15;

inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kTraceTolerance = 1e-12;
inline constexpr double kPositivityTolerance = 1e-10;
inline constexpr double kUnitaryTolerance = 1e-10;

namespace detail {

inline std::size_t checked_product(const Dims& dims, std::size_t cap = kMaxDimension) {
  if (dims.empty()) throw ArgumentError("dimension list must be non-empty");
  std::size_t total = 1;
  for (std::size_t d : dims) {
    if (d == 0) throw ArgumentError("subsystem dimension must be positive");
    if (total > cap / d) {
      throw SizeError("total dimension exceeds the dense cap of " + std::to_string(cap));
    }
    total *= d;
  }
  return total;
}

inline double max_abs(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline CMatrix hermitian_part(const CMatrix& m) {
  return (m + m.adjoint()) * 0.5;
}

// Offsets of every multi-index over the subsystems in `which`, as flat indices
// into the full space. Index order follows `which` with the last entry fastest.
inline std::vector<std::size_t> subsystem_offsets(const Dims& dims,
                                                  const std::vector<std::size_t>& which) {
  std::vector<std::size_t> strides(dims.size());
  std::size_t s = 1;
  for (std::size_t k = dims.size(); k-- > 0;) {
    strides[k] = s;
    s *= dims[k];
  }
  std::vector<std::size_t> offsets{0};
  for (std::size_t k : which) {
    std::vector<std::size_t> next;
    next.reserve(offsets.size() * dims[k]);
    for (std::size_t base : offsets) {
      for (std::size_t i = 0; i < dims[k]; ++i) next.push_back(base + i * strides[k]);
    }
    offsets = std::move(next);
  }
  return offsets;
}

struct KeepSplit {
  std::vector<std::size_t> keep;
  std::vector<std::size_t> traced;
};

inline KeepSplit split_subsystems(const Dims& dims, std::span<const std::size_t> keep) {
  if (keep.empty()) throw ArgumentError("partial_trace: keep list must be non-empty");
  KeepSplit out;
  out.keep.assign(keep.begin(), keep.end());
  std::sort(out.keep.begin(), out.keep.end());
  if (std::adjacent_find(out.keep.begin(), out.keep.end()) != out.keep.end()) {
    throw ArgumentError("partial_trace: duplicate subsystem index");
  }
  if (out.keep.back() >= dims.size()) {
    throw ArgumentError("partial_trace: subsystem index " + std::to_string(out.keep.back()) +
                        " out of range for " + std::to_string(dims.size()) + " subsystems");
  }
  for (std::size_t k = 0; k < dims.size(); ++k) {
    if (!std::binary_search(out.keep.begin(), out.keep.end(), k)) out.traced.push_back(k);
  }
  return out;
}

}  // namespace detail

/// Kronecker product of two dense matrices.
inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline CVector kron(const CVector& a, const CVector& b) {
  CVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

/// Normalized amplitude vector over a tensor-product space.
class StateVector {
 public:
  StateVector(Dims dims, CVector amps) : dims_(std::move(dims)), amps_(std::move(amps)) {
    const std::size_t total = detail::checked_product(dims_);
    if (static_cast<std::size_t>(amps_.size()) != total) {
      throw ArgumentError("StateVector: amplitude count " + std::to_string(amps_.size()) +
                          " does not match product of dims " + std::to_string(total));
    }
    const double norm2 = amps_.squaredNorm();
    if (std::abs(norm2 - 1.0) > kNormTolerance) {
      throw ArgumentError("StateVector: squared norm " + std::to_string(norm2) + " is not 1");
    }
  }

  /// Rescales `amps` to unit norm before validating.
  static StateVector normalized(Dims dims, CVector amps) {
    const double n = amps.norm();
    if (n == 0.0) throw ArgumentError("StateVector: cannot normalize the zero vector");
    amps /= n;
    return StateVector(std::move(dims), std::move(amps));
  }

  static StateVector basis_state(Dims dims, std::size_t index) {
    const std::size_t total = detail::checked_product(dims);
    if (index >= total) throw ArgumentError("StateVector: basis index out of range");
    CVector amps = CVector::Zero(static_cast<Eigen::Index>(total));
    amps(static_cast<Eigen::Index>(index)) = 1.0;
    return StateVector(std::move(dims), std::move(amps));
  }

  /// a|0> + b|1> on a single qubit.
  static StateVector qubit(cplx a, cplx b) {
    CVector amps(2);
    amps << a, b;
    return StateVector({2}, std::move(amps));
  }

  const Dims& dims() const noexcept { return dims_; }
  const CVector& amps() const noexcept { return amps_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(amps_.size()); }
  cplx operator[](std::size_t i) const { return amps_(static_cast<Eigen::Index>(i)); }

 private:
  Dims dims_;
  CVector amps_;
};

/// <a|b>, conjugate-linear in the first argument.
inline cplx inner(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim()) throw ArgumentError("inner: dimension mismatch");
  return a.amps().dot(b.amps());
}

/// Hermitian, positive semidefinite, unit-trace matrix.
class DensityMatrix {
 public:
  DensityMatrix(Dims dims, CMatrix mat) : dims_(std::move(dims)), mat_(std::move(mat)) {
    const std::size_t total = detail::checked_product(dims_);
    if (static_cast<std::size_t>(mat_.rows()) != total || mat_.rows() != mat_.cols()) {
      throw ArgumentError("DensityMatrix: matrix shape does not match dims");
    }
    if (detail::max_abs(mat_ - mat_.adjoint()) > kHermitianTolerance) {
      throw ArgumentError("DensityMatrix: matrix is not Hermitian");
    }
    const double tr = mat_.trace().real();
    if (std::abs(tr - 1.0) > kTraceTolerance) {
      throw ArgumentError("DensityMatrix: trace " + std::to_string(tr) + " is not 1");
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(mat_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -kPositivityTolerance) {
      throw ArgumentError("DensityMatrix: matrix has a negative eigenvalue");
    }
  }

  /// Symmetrizes and rescales to unit trace, then validates. For matrices
  /// produced by floating-point updates that are Hermitian only up to rounding.
  static DensityMatrix normalized(Dims dims, const CMatrix& mat) {
    CMatrix h = detail::hermitian_part(mat);
    const double tr = h.trace().real();
    if (!(tr > 0.0)) throw ArgumentError("DensityMatrix: non-positive trace");
    return DensityMatrix(std::move(dims), h / tr);
  }

  static DensityMatrix from_pure(const StateVector& psi) {
    const CVector& v = psi.amps();
    return DensityMatrix(psi.dims(), detail::hermitian_part(v * v.adjoint()));
  }

  static DensityMatrix maximally_mixed(Dims dims) {
    const auto d = static_cast<Eigen::Index>(detail::checked_product(dims));
    return DensityMatrix(std::move(dims), CMatrix::Identity(d, d) / static_cast<double>(d));
  }

  const Dims& dims() const noexcept { return dims_; }
  const CMatrix& matrix() const noexcept { return mat_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(mat_.rows()); }
  cplx operator()(std::size_t i, std::size_t j) const {
    return mat_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

 private:
  Dims dims_;
  CMatrix mat_;
};

/// Orthonormal basis of one subsystem (columns of a unitary).
///
/// A basis whose dimension equals the whole space may be applied directly;
/// otherwise it is lifted onto subsystem `subsystem()` of the target.
class BasisSpec {
 public:
  BasisSpec(std::size_t subsystem, CMatrix unitary)
      : subsystem_(subsystem), unitary_(std::move(unitary)) {
    if (unitary_.rows() == 0 || unitary_.rows() != unitary_.cols()) {
      throw ArgumentError("BasisSpec: basis matrix must be square and non-empty");
    }
    const CMatrix gram = unitary_.adjoint() * unitary_;
    if (detail::max_abs(gram - CMatrix::Identity(gram.rows(), gram.cols())) > kUnitaryTolerance) {
      throw ArgumentError("BasisSpec: columns are not orthonormal");
    }
  }

  static BasisSpec computational(std::size_t dim, std::size_t subsystem = 0) {
    const auto d = static_cast<Eigen::Index>(dim);
    return BasisSpec(subsystem, CMatrix::Identity(d, d));
  }

  /// sigma_z eigenbasis {|0>, |1>}.
  static BasisSpec z(std::size_t subsystem = 0) { return computational(2, subsystem); }

  /// sigma_x eigenbasis {|+x>, |-x>}.
  static BasisSpec x(std::size_t subsystem = 0) {
    CMatrix u(2, 2);
    const double s = 1.0 / std::sqrt(2.0);
    u << s, s, s, -s;
    return BasisSpec(subsystem, u);
  }

  /// Real rotation of the z basis: {cos t|0> + sin t|1>, -sin t|0> + cos t|1>}.
  static BasisSpec rotated(double theta, std::size_t subsystem = 0) {
    CMatrix u(2, 2);
    u << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
    return BasisSpec(subsystem, u);
  }

  std::size_t subsystem() const noexcept { return subsystem_; }
  const CMatrix& unitary() const noexcept { return unitary_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(unitary_.rows()); }

  StateVector state(std::size_t column) const {
    if (column >= dim()) throw ArgumentError("BasisSpec: column out of range");
    return StateVector({dim()}, unitary_.col(static_cast<Eigen::Index>(column)));
  }

 private:
  std::size_t subsystem_;
  CMatrix unitary_;
};

/// Product basis U_a (x) U_b; the result addresses the whole composite space.
inline BasisSpec tensor(const BasisSpec& a, const BasisSpec& b) {
  return BasisSpec(0, kron(a.unitary(), b.unitary()));
}

/// Full-space unitary for `basis` acting on a space with subsystem dims `dims`.
inline CMatrix lift(const BasisSpec& basis, const Dims& dims) {
  const std::size_t total = detail::checked_product(dims);
  if (basis.dim() == total) return basis.unitary();
  const std::size_t k = basis.subsystem();
  if (k >= dims.size() || dims[k] != basis.dim()) {
    throw ArgumentError("basis of dimension " + std::to_string(basis.dim()) +
                        " does not match the target space");
  }
  CMatrix out = CMatrix::Identity(1, 1);
  for (std::size_t j = 0; j < dims.size(); ++j) {
    const auto d = static_cast<Eigen::Index>(dims[j]);
    out = kron(out, j == k ? basis.unitary() : CMatrix(CMatrix::Identity(d, d)));
  }
  return out;
}

inline StateVector tensor(const StateVector& a, const StateVector& b) {
  Dims dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  detail::checked_product(dims);
  return StateVector(std::move(dims), kron(a.amps(), b.amps()));
}

inline DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  Dims dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  detail::checked_product(dims);
  return DensityMatrix(std::move(dims), kron(a.matrix(), b.matrix()));
}

/// Reduced state on the subsystems in `keep` (kept in ascending order).
inline DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::size_t> keep) {
  const auto split = detail::split_subsystems(rho.dims(), keep);
  const auto kept = detail::subsystem_offsets(rho.dims(), split.keep);
  const auto traced = detail::subsystem_offsets(rho.dims(), split.traced);
  const auto n = static_cast<Eigen::Index>(kept.size());
  const CMatrix& m = rho.matrix();
  CMatrix out = CMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      cplx acc = 0.0;
      for (std::size_t t : traced) {
        acc += m(static_cast<Eigen::Index>(kept[i] + t), static_cast<Eigen::Index>(kept[j] + t));
      }
      out(i, j) = acc;
    }
  }
  Dims dims;
  for (std::size_t k : split.keep) dims.push_back(rho.dims()[k]);
  return DensityMatrix::normalized(std::move(dims), out);
}

/// Reduced state of a pure state, without materializing the full projector.
inline DensityMatrix partial_trace(const StateVector& psi, std::span<const std::size_t> keep) {
  const auto split = detail::split_subsystems(psi.dims(), keep);
  const auto kept = detail::subsystem_offsets(psi.dims(), split.keep);
  const auto traced = detail::subsystem_offsets(psi.dims(), split.traced);
  CMatrix block(static_cast<Eigen::Index>(kept.size()), static_cast<Eigen::Index>(traced.size()));
  for (std::size_t i = 0; i < kept.size(); ++i) {
    for (std::size_t t = 0; t < traced.size(); ++t) {
      block(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(t)) = psi[kept[i] + traced[t]];
    }
  }
  Dims dims;
  for (std::size_t k : split.keep) dims.push_back(psi.dims()[k]);
  return DensityMatrix::normalized(std::move(dims), block * block.adjoint());
}

inline DensityMatrix partial_trace(const DensityMatrix& rho, std::initializer_list<std::size_t> keep) {
  return partial_trace(rho, std::span<const std::size_t>(keep.begin(), keep.size()));
}

inline DensityMatrix partial_trace(const StateVector& psi, std::initializer_list<std::size_t> keep) {
  return partial_trace(psi, std::span<const std::size_t>(keep.begin(), keep.size()));
}

/// Tr[rho^2].
inline double purity(const DensityMatrix& rho) { return rho.matrix().squaredNorm(); }

/// Sum of |off-diagonal entries| of U^dagger rho U.
inline double offdiag_norm(const DensityMatrix& rho, const BasisSpec& basis) {
  const CMatrix u = lift(basis, rho.dims());
  const CMatrix b = u.adjoint() * rho.matrix() * u;
  double total = 0.0;
  for (Eigen::Index i = 0; i < b.rows(); ++i) {
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
      if (i != j) total += std::abs(b(i, j));
    }
  }
  return total;
}

/// |<psi|rho|psi>| for pure psi.
inline double fidelity(const DensityMatrix& rho, const StateVector& psi) {
  if (rho.dim() != psi.dim()) throw ArgumentError("fidelity: dimension mismatch");
  return std::abs(psi.amps().dot(rho.matrix() * psi.amps()));
}

inline double min_eigenvalue(const CMatrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace decolab
