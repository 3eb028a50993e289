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
 * Pointer-basis phenomena for a system S, apparatus qubit A and spin
 * environment E:
 *
 *  - the S (x) A (x) E state a|+>|U>|E_U(t)> + b|->|D>|E_D(t)> obtained by
 *    coupling a premeasured pair to the spin bath through A,
 *  - how S-A correlations survive in the pointer basis and fade in rotated
 *    apparatus bases,
 *  - a predictability sieve ranking candidate apparatus bases by the
 *    time-averaged purity their states keep under the same coupling,
 *  - an n+1 level apparatus whose coherences are damped by supplied
 *    environment overlaps, for pure or mixed initial environment labels.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "decolab/errors.hpp"
#include "decolab/spin_bath.hpp"
#include "decolab/state_algebra.hpp"
#include "decolab/time_series.hpp"

namespace decolab {

/// Largest environment for an explicit S (x) A (x) E state (2^{N+2} <= 2^15).
inline constexpr std::size_t kMaxTriSpins = 13;

/// System amplitudes (a, b) on {|+>, |->} and the A-E coupling. The
/// amplitudes stored in `bath` are the system amplitudes; after premeasurement
/// they are also the weights of the two apparatus branches.
struct TriConfig {
  SpinBathConfig bath;

  cplx a() const noexcept { return bath.a(); }
  cplx b() const noexcept { return bath.b(); }
};

/// Explicit state over S (x) A (x) E_1 ... E_N, S and A first.
inline StateVector tridecompose_state(const TriConfig& cfg, double t) {
  if (cfg.bath.size() > kMaxTriSpins) {
    throw SizeError("tridecompose_state: N = " + std::to_string(cfg.bath.size()) +
                    " exceeds the cap of " + std::to_string(kMaxTriSpins));
  }
  const auto up = environment_branch(cfg.bath, t, Branch::Up);
  const auto down = environment_branch(cfg.bath, t, Branch::Down);
  CVector plus_up = CVector::Zero(4);
  plus_up(0) = 1.0;
  CVector minus_down = CVector::Zero(4);
  minus_down(3) = 1.0;
  CVector amps = cfg.a() * kron(plus_up, up.amps()) + cfg.b() * kron(minus_down, down.amps());
  Dims dims{2, 2};
  dims.insert(dims.end(), up.dims().begin(), up.dims().end());
  return StateVector::normalized(std::move(dims), std::move(amps));
}

/// rho_SA(t) by tracing the environment out of the explicit state.
inline DensityMatrix reduced_state_SA(const TriConfig& cfg, double t) {
  return partial_trace(tridecompose_state(cfg, t), {0, 1});
}

/// Strongest S-A correlator available to an apparatus basis.
///
/// For the apparatus basis {|u_0>, |u_1>} rotated by theta from {|U>, |D>},
/// with Q = |u_0><u_0| - |u_1><u_1|, returns
///
///   max over unit n of Tr[rho_SA (n.sigma (x) Q)] = |(<sigma_x Q>, <sigma_y Q>, <sigma_z Q>)|.
///
/// In the pointer basis (theta = 0) this is 1 for all t. At theta = pi/4 the
/// correlation lives entirely in the S-A coherence and equals 2|a||b||r(t)|.
inline double rotated_correlation(const DensityMatrix& rho_sa, double theta) {
  if (rho_sa.dims() != Dims{2, 2}) throw ArgumentError("rotated_correlation: expected rho_SA on 2 x 2");
  CMatrix sx(2, 2), sy(2, 2), sz(2, 2);
  sx << 0, 1, 1, 0;
  sy << 0, cplx(0, -1), cplx(0, 1), 0;
  sz << 1, 0, 0, -1;
  const CMatrix q = std::cos(2 * theta) * sz + std::sin(2 * theta) * sx;
  double norm2 = 0.0;
  for (const CMatrix* s : {&sx, &sy, &sz}) {
    const double c = (rho_sa.matrix() * kron(*s, q)).trace().real();
    norm2 += c * c;
  }
  return std::sqrt(norm2);
}

inline TimeSeries<double> basis_correlation_decay(const TriConfig& cfg, double theta,
                                                  const std::vector<double>& t_grid) {
  if (!(theta >= 0.0 && theta <= std::numbers::pi / 2)) {
    throw ArgumentError("basis_correlation_decay: theta must lie in [0, pi/2]");
  }
  TimeSeries<double> out;
  out.metadata["theta"] = std::to_string(theta);
  out.metadata["measure"] = "max_n <n.sigma (x) Q_theta>";
  for (double t : t_grid) {
    out.times.push_back(t);
    out.values.push_back(rotated_correlation(reduced_state_SA(cfg, t), theta));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Predictability sieve
// ---------------------------------------------------------------------------

struct SieveEntry {
  std::size_t candidate = 0;  ///< index in the input list
  double score = 0.0;         ///< mean over basis states of time-averaged purity
  std::vector<double> state_scores;
};

/// Time-averaged purity of rho_A(t) for A prepared in `state` and coupled to
/// the environment of `env`. Uses the closed-form reduced state, so any N works.
inline double averaged_purity(const StateVector& state, const SpinBathConfig& env,
                              const std::vector<double>& t_grid) {
  if (state.dim() != 2) throw ArgumentError("predictability_sieve: candidate states must be qubits");
  if (t_grid.empty()) throw ArgumentError("predictability_sieve: empty time grid");
  const auto cfg = env.with_system(state[0], state[1]);
  double sum = 0.0;
  for (double t : t_grid) sum += purity(reduced_state_A(cfg, t));
  return sum / static_cast<double>(t_grid.size());
}

/// Ranks candidate apparatus bases, best first (stable on ties). Each basis
/// scores the mean over its states of the time-averaged purity of rho_A.
inline std::vector<SieveEntry> predictability_sieve(const std::vector<BasisSpec>& candidates,
                                                    const SpinBathConfig& env,
                                                    const std::vector<double>& t_grid) {
  if (candidates.empty()) throw ArgumentError("predictability_sieve: no candidate bases");
  std::vector<SieveEntry> ranking;
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    SieveEntry e;
    e.candidate = c;
    for (std::size_t s = 0; s < candidates[c].dim(); ++s) {
      e.state_scores.push_back(averaged_purity(candidates[c].state(s), env, t_grid));
    }
    e.score = std::accumulate(e.state_scores.begin(), e.state_scores.end(), 0.0) /
              static_cast<double>(e.state_scores.size());
    ranking.push_back(std::move(e));
  }
  std::stable_sort(ranking.begin(), ranking.end(),
                   [](const SieveEntry& x, const SieveEntry& y) { return x.score > y.score; });
  return ranking;
}

// ---------------------------------------------------------------------------
// Generalized apparatus
// ---------------------------------------------------------------------------

/// Pointer states |phi_0> (ready) ... |phi_n> with branch amplitudes c_i and
/// environment overlaps kappa_j(i, i', t) = <chi_{i' j}|chi_{i j}>(t), one
/// overlap family per initial environment label j with weight w_j.
class ApparatusModel {
 public:
  using Overlap = std::function<cplx(std::size_t i, std::size_t ip, std::size_t j, double t)>;

  ApparatusModel(CVector amplitudes, Overlap kappa, std::vector<double> weights = {1.0})
      : c_(std::move(amplitudes)), kappa_(std::move(kappa)), w_(std::move(weights)) {
    if (c_.size() < 2) throw ArgumentError("ApparatusModel: need at least two pointer states");
    if (std::abs(c_.squaredNorm() - 1.0) > kNormTolerance) {
      throw ArgumentError("ApparatusModel: branch amplitudes must be normalized");
    }
    if (!kappa_) throw ArgumentError("ApparatusModel: overlap function is empty");
    if (w_.empty()) throw ArgumentError("ApparatusModel: need at least one mixture weight");
    double total = 0.0;
    for (double w : w_) {
      if (!(w >= 0.0)) throw ArgumentError("ApparatusModel: mixture weights must be non-negative");
      total += w;
    }
    if (std::abs(total - 1.0) > 1e-12) throw ArgumentError("ApparatusModel: weights must sum to 1");
  }

  const CVector& amplitudes() const noexcept { return c_; }
  const std::vector<double>& weights() const noexcept { return w_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(c_.size()); }

  cplx overlap(std::size_t i, std::size_t ip, std::size_t j, double t) const {
    return kappa_(i, ip, j, t);
  }

 private:
  CVector c_;
  Overlap kappa_;
  std::vector<double> w_;
};

/// kappa_j(i, i', t) = exp(-rate_j t) for i != i'. A single rate is a pure
/// environment label; several rates with weights give a mixture.
inline ApparatusModel exponential_decay_model(CVector amplitudes, std::vector<double> rates,
                                              std::vector<double> weights = {}) {
  if (rates.empty()) throw ArgumentError("exponential_decay_model: need at least one rate");
  if (weights.empty()) weights.assign(rates.size(), 1.0 / static_cast<double>(rates.size()));
  if (weights.size() != rates.size()) {
    throw ArgumentError("exponential_decay_model: one weight per rate");
  }
  auto kappa = [rates](std::size_t i, std::size_t ip, std::size_t j, double t) -> cplx {
    return i == ip ? 1.0 : std::exp(-rates.at(j) * t);
  };
  return ApparatusModel(std::move(amplitudes), std::move(kappa), std::move(weights));
}

/// rho_A(t)_{i i'} = sum_j w_j c_i c_{i'}^* kappa_j(i, i', t).
inline DensityMatrix apparatus_reduced_state(const ApparatusModel& m, double t) {
  const auto n = static_cast<Eigen::Index>(m.dim());
  const CVector& c = m.amplitudes();
  CMatrix rho = CMatrix::Zero(n, n);
  for (std::size_t j = 0; j < m.weights().size(); ++j) {
    const double w = m.weights()[j];
    if (w == 0.0) continue;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index ip = 0; ip < n; ++ip) {
        const auto iu = static_cast<std::size_t>(i);
        const auto ipu = static_cast<std::size_t>(ip);
        const cplx k = m.overlap(iu, ipu, j, t);
        if (i == ip && std::abs(k - cplx(1.0)) > 1e-12) {
          throw ArgumentError("ApparatusModel: kappa(i, i, t) must be 1");
        }
        if (std::abs(k) > 1.0 + 1e-12) throw ArgumentError("ApparatusModel: |kappa| exceeds 1");
        if (ip > i && std::abs(k - std::conj(m.overlap(ipu, iu, j, t))) > 1e-12) {
          throw ArgumentError("ApparatusModel: kappa is not Hermitian-symmetric");
        }
        rho(i, ip) += w * c(i) * std::conj(c(ip)) * k;
      }
    }
  }
  return DensityMatrix({m.dim()}, detail::hermitian_part(rho));
}

}  // namespace decolab
