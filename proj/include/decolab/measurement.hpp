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
 * Measurement calculus: c-NOT premeasurement, Born probabilities, sampled
 * collapse, projective (Luders) updates and general Kraus/POVM updates.
 *
 * Kraus sets are always explicit inputs. Nothing here tries to derive the
 * measurement operators of a device.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "decolab/errors.hpp"
#include "decolab/random.hpp"
#include "decolab/state_algebra.hpp"

namespace decolab {

/// Outcomes with probability at or below this are impossible.
inline constexpr double kImpossibleProbability = 1e-14;
inline constexpr double kCompletenessTolerance = 1e-10;

/// Hermitian idempotent matrix.
class Projector {
 public:
  explicit Projector(CMatrix p) : p_(std::move(p)) {
    if (p_.rows() != p_.cols() || p_.rows() == 0) throw ArgumentError("Projector: must be square");
    if (detail::max_abs(p_ - p_.adjoint()) > 1e-10) {
      throw ArgumentError("Projector: matrix is not Hermitian");
    }
    if (detail::max_abs(p_ * p_ - p_) > 1e-10) throw ArgumentError("Projector: P^2 != P");
  }

  /// Projector onto the span of orthonormal vectors `vs`.
  static Projector onto(const std::vector<CVector>& vs) {
    if (vs.empty()) throw ArgumentError("Projector: need at least one vector");
    CMatrix p = CMatrix::Zero(vs.front().size(), vs.front().size());
    for (const auto& v : vs) p += v * v.adjoint();
    return Projector(detail::hermitian_part(p));
  }

  static Projector onto(const StateVector& psi) { return onto(std::vector<CVector>{psi.amps()}); }

  /// |i><i| summed over the computational indices in `indices`.
  static Projector computational(std::size_t dim, const std::vector<std::size_t>& indices) {
    const auto d = static_cast<Eigen::Index>(dim);
    CMatrix p = CMatrix::Zero(d, d);
    for (std::size_t i : indices) {
      if (i >= dim) throw ArgumentError("Projector: index out of range");
      p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1.0;
    }
    return Projector(p);
  }

  Projector complement() const {
    return Projector(CMatrix::Identity(p_.rows(), p_.cols()) - p_);
  }

  const CMatrix& matrix() const noexcept { return p_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(p_.rows()); }

 private:
  CMatrix p_;
};

/// Measurement operators {M_i}; the POVM is {M_i^dagger M_i}.
///
/// Completeness is not enforced here: truncated and quadrature-discretized
/// sets are legitimate inputs whose deviation validate_kraus() reports.
class KrausSet {
 public:
  KrausSet(std::vector<CMatrix> ops, std::vector<std::string> labels = {})
      : ops_(std::move(ops)), labels_(std::move(labels)) {
    if (ops_.empty()) throw ArgumentError("KrausSet: need at least one operator");
    const auto d = ops_.front().rows();
    for (const auto& m : ops_) {
      if (m.rows() != d || m.cols() != d || d == 0) {
        throw ArgumentError("KrausSet: operators must be square and share one shape");
      }
    }
    if (labels_.empty()) {
      for (std::size_t i = 0; i < ops_.size(); ++i) labels_.push_back(std::to_string(i));
    }
    if (labels_.size() != ops_.size()) throw ArgumentError("KrausSet: label count mismatch");
  }

  /// {P, I - P}.
  static KrausSet projective(const Projector& p, std::string yes = "yes", std::string no = "no") {
    return KrausSet({p.matrix(), p.complement().matrix()}, {std::move(yes), std::move(no)});
  }

  const std::vector<CMatrix>& operators() const noexcept { return ops_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::size_t size() const noexcept { return ops_.size(); }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(ops_.front().rows()); }

 private:
  std::vector<CMatrix> ops_;
  std::vector<std::string> labels_;
};

struct MeasurementRecord {
  std::size_t outcome = 0;
  std::string label;
  double probability = 0.0;
  DensityMatrix post_state;
};

struct KrausReport {
  double deviation = 0.0;  ///< max |(sum M^dagger M - I)_{jk}|
  double tolerance = kCompletenessTolerance;
  bool passed = false;
};

// ---------------------------------------------------------------------------
// Premeasurement
// ---------------------------------------------------------------------------

/// c-NOT between system {|+>, |->} (control) and apparatus {|U>, |D>} (target):
/// a|+>|U> + b|->|U>  ->  a|+>|U> + b|->|D>.
inline StateVector premeasure_cnot(const StateVector& sys, const StateVector& app_ready) {
  if (sys.dims() != Dims{2} || app_ready.dims() != Dims{2}) {
    throw ArgumentError("premeasure_cnot: system and apparatus must be single qubits");
  }
  if (std::norm(app_ready[0]) < 1.0 - 1e-12) {
    throw ArgumentError("premeasure_cnot: apparatus is not in the ready state |U>");
  }
  const CVector joint = kron(sys.amps(), app_ready.amps());
  CVector out(4);
  out << joint(0), joint(1), joint(3), joint(2);
  return StateVector({2, 2}, out);
}

// ---------------------------------------------------------------------------
// Born rule and sampling
// ---------------------------------------------------------------------------

/// Tr[P rho], clamped to [0, 1].
inline double born_probability(const DensityMatrix& rho, const Projector& p) {
  if (rho.dim() != p.dim()) throw ArgumentError("born_probability: shape mismatch");
  const double v = (p.matrix() * rho.matrix()).trace().real();
  return std::clamp(v, 0.0, 1.0);
}

namespace detail {

// (I (x) op (x) I) psi, with op acting on subsystem k.
inline CVector apply_on_subsystem(const CVector& amps, const Dims& dims, std::size_t k,
                                  const CMatrix& op) {
  std::size_t inner = 1;
  for (std::size_t j = k + 1; j < dims.size(); ++j) inner *= dims[j];
  const std::size_t dk = dims[k];
  const std::size_t outer = static_cast<std::size_t>(amps.size()) / (dk * inner);
  CVector out = CVector::Zero(amps.size());
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t in = 0; in < inner; ++in) {
      for (std::size_t i = 0; i < dk; ++i) {
        cplx acc = 0.0;
        for (std::size_t j = 0; j < dk; ++j) {
          acc += op(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) *
                 amps(static_cast<Eigen::Index>((o * dk + j) * inner + in));
        }
        out(static_cast<Eigen::Index>((o * dk + i) * inner + in)) = acc;
      }
    }
  }
  return out;
}

// Projected (unnormalized) branches of psi for every column of `basis`.
inline std::vector<CVector> basis_branches(const StateVector& psi, const BasisSpec& basis) {
  std::vector<CVector> branches;
  const CMatrix& u = basis.unitary();
  if (basis.dim() == psi.dim()) {
    for (Eigen::Index i = 0; i < u.cols(); ++i) {
      branches.push_back(u.col(i) * u.col(i).dot(psi.amps()));
    }
    return branches;
  }
  const std::size_t k = basis.subsystem();
  if (k >= psi.dims().size() || psi.dims()[k] != basis.dim()) {
    throw ArgumentError("basis does not match any subsystem of the state");
  }
  for (Eigen::Index i = 0; i < u.cols(); ++i) {
    const CMatrix proj = u.col(i) * u.col(i).adjoint();
    branches.push_back(apply_on_subsystem(psi.amps(), psi.dims(), k, proj));
  }
  return branches;
}

inline std::size_t sample_index(const std::vector<double>& probs, Rng& rng) {
  const double u = uniform01(rng) * std::accumulate(probs.begin(), probs.end(), 0.0);
  double cum = 0.0;
  std::size_t last_possible = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    last_possible = i;
    cum += probs[i];
    if (u < cum) return i;
  }
  return last_possible;
}

}  // namespace detail

/// Born weights of each basis state of `basis` (whole space or one subsystem).
inline std::vector<double> born_weights(const StateVector& psi, const BasisSpec& basis) {
  std::vector<double> p;
  for (const auto& br : detail::basis_branches(psi, basis)) p.push_back(br.squaredNorm());
  return p;
}

/// Samples one outcome by inverse CDF over the Born weights. The post-state is
/// the basis state itself when `basis` spans the whole space, otherwise the
/// normalized projection of `state` onto the selected subsystem basis state.
inline MeasurementRecord collapse_sample(const StateVector& state, const BasisSpec& basis,
                                         std::uint64_t seed) {
  Rng rng = make_stream(seed);
  const auto branches = detail::basis_branches(state, basis);
  std::vector<double> probs;
  for (const auto& br : branches) probs.push_back(br.squaredNorm());
  const std::size_t i = detail::sample_index(probs, rng);
  const auto post = StateVector::normalized(state.dims(), branches[i]);
  return {i, std::to_string(i), probs[i], DensityMatrix::from_pure(post)};
}

/// Outcome counts of `shots` independent collapses, from one seeded stream.
inline std::vector<std::size_t> sample_counts(const StateVector& state, const BasisSpec& basis,
                                              std::size_t shots, std::uint64_t seed) {
  Rng rng = make_stream(seed);
  const auto probs = born_weights(state, basis);
  std::vector<std::size_t> counts(probs.size(), 0);
  for (std::size_t s = 0; s < shots; ++s) ++counts[detail::sample_index(probs, rng)];
  return counts;
}

struct ChiSquareResult {
  double statistic = 0.0;
  std::size_t dof = 0;
  double p_value = 1.0;
};

/// Pearson goodness-of-fit of `counts` against `probs`.
inline ChiSquareResult chi_square_test(const std::vector<std::size_t>& counts,
                                       const std::vector<double>& probs) {
  if (counts.size() != probs.size()) throw ArgumentError("chi_square_test: size mismatch");
  const double n = static_cast<double>(std::accumulate(counts.begin(), counts.end(), std::size_t{0}));
  ChiSquareResult res;
  std::size_t support = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double expected = n * probs[i];
    if (probs[i] <= kImpossibleProbability) {
      if (counts[i] > 0) {
        res.p_value = 0.0;
        res.statistic = std::numeric_limits<double>::infinity();
        return res;
      }
      continue;
    }
    ++support;
    const double diff = static_cast<double>(counts[i]) - expected;
    res.statistic += diff * diff / expected;
  }
  res.dof = support > 0 ? support - 1 : 0;
  res.p_value = res.dof == 0 ? 1.0
                             : boost::math::gamma_q(static_cast<double>(res.dof) / 2.0,
                                                    res.statistic / 2.0);
  return res;
}

// ---------------------------------------------------------------------------
// State updates
// ---------------------------------------------------------------------------

/// rho -> P rho P / Tr[P rho P].
inline DensityMatrix luders_update(const DensityMatrix& rho, const Projector& p) {
  if (rho.dim() != p.dim()) throw ArgumentError("luders_update: shape mismatch");
  const CMatrix num = p.matrix() * rho.matrix() * p.matrix();
  const double prob = num.trace().real();
  if (prob <= kImpossibleProbability) {
    throw ImpossibleOutcomeError("luders_update: outcome has probability " + std::to_string(prob));
  }
  return DensityMatrix::normalized(rho.dims(), num / prob);
}

/// p_i = Tr[M_i^dagger M_i rho].
inline std::vector<double> povm_probabilities(const DensityMatrix& rho, const KrausSet& k) {
  if (rho.dim() != k.dim()) throw ArgumentError("povm_probabilities: shape mismatch");
  std::vector<double> p;
  p.reserve(k.size());
  for (const auto& m : k.operators()) {
    p.push_back(std::max(0.0, (m * rho.matrix() * m.adjoint()).trace().real()));
  }
  return p;
}

/// rho -> M_i rho M_i^dagger / Tr[M_i rho M_i^dagger]. The post-state need not
/// reproduce outcome i on repetition.
inline MeasurementRecord kraus_update(const DensityMatrix& rho, const KrausSet& k, std::size_t i) {
  if (rho.dim() != k.dim()) throw ArgumentError("kraus_update: shape mismatch");
  if (i >= k.size()) throw ArgumentError("kraus_update: outcome index out of range");
  const CMatrix& m = k.operators()[i];
  const CMatrix num = m * rho.matrix() * m.adjoint();
  const double prob = num.trace().real();
  if (prob <= kImpossibleProbability) {
    throw ImpossibleOutcomeError("kraus_update: outcome '" + k.labels()[i] + "' has probability " +
                                 std::to_string(prob));
  }
  return {i, k.labels()[i], prob, DensityMatrix::normalized(rho.dims(), num / prob)};
}

/// Max-norm deviation of sum_i M_i^dagger M_i from the identity. Never throws.
inline KrausReport validate_kraus(const KrausSet& k, double tolerance = kCompletenessTolerance) {
  const auto d = static_cast<Eigen::Index>(k.dim());
  CMatrix sum = CMatrix::Zero(d, d);
  for (const auto& m : k.operators()) sum += m.adjoint() * m;
  KrausReport rep;
  rep.deviation = detail::max_abs(sum - CMatrix::Identity(d, d));
  rep.tolerance = tolerance;
  rep.passed = rep.deviation <= tolerance;
  return rep;
}

}  // namespace decolab
