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
 * Quick invariant suite behind `decolab check`. Each check is small enough to
 * run in well under a second and uses a fixed seed.
 */

#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "decolab/cli/result_table.hpp"
#include "decolab/decolab.hpp"

namespace decolab::cli {

struct CheckResult {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double tolerance = 0.0;
};

namespace detail {

inline CheckResult bounded(std::string name, double value, double tol) {
  return {std::move(name), value <= tol, value, tol};
}

}  // namespace detail

inline std::vector<CheckResult> run_checks(std::uint64_t seed = kDefaultSeed) {
  using detail::bounded;
  std::vector<CheckResult> out;
  Rng rng = make_stream(seed, 7);

  {
    const auto [a, b] = random_qubit(rng);
    const auto [c, d] = random_qubit(rng);
    const auto r1 = DensityMatrix::from_pure(StateVector::qubit(a, b));
    const auto r2 = DensityMatrix::from_pure(StateVector::qubit(c, d));
    const auto joint = tensor(r1, r2);
    const double dev = std::max(decolab::detail::max_abs(partial_trace(joint, {0}).matrix() - r1.matrix()),
                                decolab::detail::max_abs(partial_trace(joint, {1}).matrix() - r2.matrix()));
    out.push_back(bounded("partial trace recovers product factors", dev, 1e-12));
  }

  {
    double dev = 0.0;
    for (std::size_t k = 0; k < 10; ++k) {
      const auto cfg = random_config(1 + k % 8, rng);
      const double t = uniform(rng, 0.0, 10.0);
      dev = std::max(dev, std::abs(decoherence_factor(cfg, t) - oracle_r(cfg, t)));
    }
    out.push_back(bounded("decoherence factor matches dense evolution", dev, 1e-10));
  }

  {
    const auto cfg = random_config(12, rng);
    double excess = 0.0;
    double sym = 0.0;
    for (double t = 0.0; t < 20.0; t += 0.37) {
      excess = std::max(excess, std::abs(decoherence_factor(cfg, t)) - 1.0);
      sym = std::max(sym, std::abs(decoherence_factor(cfg, -t) - std::conj(decoherence_factor(cfg, t))));
    }
    out.push_back(bounded("|r(t)| <= 1", std::max(excess, 0.0), 1e-12));
    out.push_back(bounded("r(-t) = conj r(t)", sym, 1e-12));
  }

  {
    const auto cfg = random_config(6, rng);
    const double t = 1.3;
    const auto rho = reduced_state_A(cfg, t);
    const double expect = std::abs(cfg.a()) * std::abs(cfg.b()) * std::abs(decoherence_factor(cfg, t));
    out.push_back(bounded("|rho_A off-diagonal| = |a||b||r|", std::abs(std::abs(rho(0, 1)) - expect), 1e-12));
  }

  {
    const FockSpace space(12);
    const auto set = photon_counting_set(space);
    const auto rho = DensityMatrix::from_pure(coherent_state({1.1, -0.4}, space));
    const auto p = povm_probabilities(rho, set);
    double total = 0.0;
    for (double x : p) total += x;
    out.push_back(bounded("photon counting is complete", validate_kraus(set).deviation, 1e-12));
    out.push_back(bounded("POVM probabilities sum to 1", std::abs(total - 1.0), 1e-12));
  }

  {
    CVector v(4);
    v << cplx(0.3, 0.1), cplx(-0.5, 0.2), cplx(0.7, 0.0), cplx(0.1, -0.4);
    const auto psi = StateVector::normalized({4}, v);
    const auto p = Projector::computational(4, {0, 2});
    const auto once = luders_update(DensityMatrix::from_pure(psi), p);
    const auto twice = luders_update(once, p);
    out.push_back(bounded("repeated projective update is idempotent",
                          decolab::detail::max_abs(once.matrix() - twice.matrix()), 1e-12));
  }

  {
    const auto [a, b] = random_qubit(rng);
    const auto [c, d] = random_qubit(rng);
    const auto ready = StateVector::qubit(1.0, 0.0);
    const cplx before = inner(StateVector::qubit(a, b), StateVector::qubit(c, d));
    const cplx after = inner(premeasure_cnot(StateVector::qubit(a, b), ready),
                             premeasure_cnot(StateVector::qubit(c, d), ready));
    out.push_back(bounded("premeasurement preserves inner products", std::abs(before - after), 1e-12));
  }

  {
    const TriConfig cfg{random_config(5, rng)};
    const double t = 0.8;
    const double c = rotated_correlation(reduced_state_SA(cfg, t), std::numbers::pi / 4);
    const double expect = 2.0 * std::abs(cfg.a()) * std::abs(cfg.b()) * std::abs(decoherence_factor(cfg.bath, t));
    out.push_back(bounded("diagonal-basis correlation = 2|a||b||r|", std::abs(c - expect), 1e-10));
  }

  {
    const auto env = balanced_config(uniform_couplings(8, rng), 1.0, 0.0);
    const auto rank = predictability_sieve({BasisSpec::x(), BasisSpec::z()}, env, linspace(0.0, 20.0, 201));
    out.push_back({"predictability sieve prefers the z basis", rank.front().candidate == 1,
                   rank.front().score - rank.back().score, 0.0});
  }

  {
    const FockSpace space(24);
    const auto psi = coherent_state({1.0, 0.5}, space);
    const auto rep = ehrenfest_check(space, psi, 1.0, 1.0, linspace(0.0, 2.0, 401));
    out.push_back(bounded("Ehrenfest residual at dt = 0.005", rep.max_residual, 1e-3));
  }

  return out;
}

}  // namespace decolab::cli
