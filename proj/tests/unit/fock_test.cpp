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

#include "decolab/fock.hpp"

#include <gtest/gtest.h>

#include <numbers>

#include "test_util.hpp"

using namespace decolab;
using std::numbers::pi;

TEST(FockSpace, ladder_operators_obey_truncated_commutator) {
  const FockSpace space(8);
  const CMatrix comm = space.annihilation() * space.creation() - space.creation() * space.annihilation();
  for (Eigen::Index n = 0; n < 8; ++n) EXPECT_NEAR(std::abs(comm(n, n) - 1.0), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(comm(8, 8) + 8.0), 0.0, 1e-14);
  EXPECT_LT(decolab::detail::max_abs(space.number() - space.creation() * space.annihilation()), 1e-14);
}

TEST(CoherentState, zero_amplitude_is_vacuum) {
  const FockSpace space(20);
  EXPECT_LT((coherent_state(0.0, space).amps() - space.vacuum().amps()).norm(), 1e-15);
}

TEST(CoherentState, mean_photon_number_is_modulus_squared) {
  const FockSpace space(20);
  EXPECT_NEAR(expectation(space.number(), coherent_state(1.0, space)), 1.0, 1e-6);
}

TEST(CoherentState, overlap_matches_closed_form) {
  const FockSpace space(20);
  const cplx a(0.7, -0.3), b(-0.2, 0.9);
  const cplx expect = std::exp(-(std::norm(a) + std::norm(b)) / 2.0 + std::conj(a) * b);
  EXPECT_NEAR(std::abs(inner(coherent_state(a, space), coherent_state(b, space)) - expect), 0.0, 1e-6);
}

TEST(CoherentState, amplitudes_follow_poisson_weights) {
  const FockSpace space(20);
  const auto psi = coherent_state(1.0, space);
  for (unsigned n = 0; n <= 20; ++n) {
    EXPECT_NEAR(std::norm(psi[n]), std::exp(-1.0) / testutil::factorial(n), 1e-12) << n;
  }
}

TEST(CoherentState, refuses_amplitudes_near_the_cutoff) {
  const FockSpace space(20);
  EXPECT_NO_THROW(coherent_state(std::sqrt(5.0), space));
  EXPECT_THROW(coherent_state(std::sqrt(5.1), space), TruncationError);
  EXPECT_LT(coherent_truncation_loss(std::sqrt(5.0), space), 1e-6);
}

TEST(PhotonCounting, destroys_the_counted_photons) {
  const FockSpace space(20);
  const auto set = photon_counting_set(space);
  const auto rho = DensityMatrix::from_pure(space.fock_state(2));
  const auto probs = povm_probabilities(rho, set);
  for (std::size_t n = 0; n < probs.size(); ++n) EXPECT_EQ(probs[n], n == 2 ? 1.0 : 0.0);
  const auto rec = kraus_update(rho, set, 2);
  EXPECT_GT(fidelity(rec.post_state, space.vacuum()), 1.0 - 1e-12);
}

TEST(PhotonCounting, vacuum_gives_outcome_zero) {
  const FockSpace space(6);
  const auto probs = povm_probabilities(DensityMatrix::from_pure(space.vacuum()), photon_counting_set(space));
  EXPECT_EQ(probs[0], 1.0);
}

TEST(PhotonCounting, coherent_input_is_poisson) {
  const FockSpace space(20);
  const auto probs = povm_probabilities(DensityMatrix::from_pure(coherent_state(1.0, space)), photon_counting_set(space));
  for (unsigned n = 0; n <= 20; ++n) EXPECT_NEAR(probs[n], std::exp(-1.0) / testutil::factorial(n), 1e-6) << n;
}

TEST(PhotonCounting, is_complete_on_the_truncation) {
  EXPECT_LT(validate_kraus(photon_counting_set(FockSpace(20))).deviation, 1e-14);
}

TEST(GaussLegendre, integrates_polynomials_exactly) {
  const auto [x, w] = gauss_legendre(6);
  for (int k = 0; k <= 11; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * std::pow(x[i], k);
    EXPECT_NEAR(s, k % 2 ? 0.0 : 2.0 / (k + 1), 1e-13) << k;
  }
}

TEST(CoherentSet, default_grid_is_nearly_complete) {
  const auto set = coherent_measurement_set(polar_grid(), FockSpace(10));
  const auto rep = validate_kraus(set, 0.02);
  EXPECT_TRUE(rep.passed);
  EXPECT_LT(rep.deviation, 0.02);
}

TEST(CoherentSet, refining_the_grid_improves_completeness) {
  const FockSpace space(10);
  double previous = std::numeric_limits<double>::infinity();
  for (std::size_t n : {8, 16, 32}) {
    const double dev = validate_kraus(coherent_measurement_set(polar_grid(8.0, n, n), space)).deviation;
    EXPECT_LT(dev, previous) << n;
    previous = dev;
  }
}

TEST(CoherentSet, single_point_fails_completeness) {
  const CoherentGrid grid{{cplx(0.0)}, {pi}, 8.0};
  EXPECT_FALSE(validate_kraus(coherent_measurement_set(grid, FockSpace(10))).passed);
}

TEST(CoherentSet, post_state_is_the_coherent_state) {
  const FockSpace space(16);
  const CoherentGrid grid{{cplx(0.5, 0.5), cplx(-1.0, 0.2)}, {0.1, 0.1}, 8.0};
  const auto set = coherent_measurement_set(grid, space);
  const auto rho = DensityMatrix::from_pure(space.fock_state(1));
  for (std::size_t k = 0; k < 2; ++k) {
    const auto rec = kraus_update(rho, set, k);
    EXPECT_GT(fidelity(rec.post_state, coherent_state(grid.points[k], space)), 1.0 - 1e-12);
  }
}

TEST(CoherentSet, rejects_small_radius) {
  const CoherentGrid grid{{cplx(0.0)}, {1.0}, 1.0};
  EXPECT_THROW(coherent_measurement_set(grid, FockSpace(10)), ArgumentError);
}

TEST(Ehrenfest, ground_state_is_stationary) {
  const FockSpace space(20);
  const auto rep = ehrenfest_check(space, space.vacuum(), 1.0, 1.0, linspace(0.0, 1.0, 101));
  EXPECT_LT(rep.max_residual, 1e-10);
}

TEST(Ehrenfest, coherent_state_follows_classical_orbit) {
  const FockSpace space(30);
  const cplx alpha = 1.0;
  const auto rep = ehrenfest_check(space, coherent_state(alpha, space), 1.0, 1.0, linspace(0.0, 2.0, 2001));
  EXPECT_LT(rep.max_residual, 1e-5);
  for (std::size_t j = 0; j < rep.times.size(); j += 100) {
    const cplx at = alpha * std::polar(1.0, -rep.times[j]);
    EXPECT_NEAR(rep.mean_x[j], std::sqrt(2.0) * at.real(), 1e-9);
    EXPECT_NEAR(rep.mean_p[j], std::sqrt(2.0) * at.imag(), 1e-9);
  }
}

TEST(Ehrenfest, superposition_state_satisfies_relation) {
  const FockSpace space(20);
  CVector v = CVector::Zero(21);
  v(0) = v(2) = 1.0 / std::sqrt(2.0);
  const auto rep = ehrenfest_check(space, StateVector({21}, v), 1.0, 1.0, linspace(0.0, 2.0, 2001));
  EXPECT_LT(rep.max_residual, 1e-5);
}

TEST(Ehrenfest, halving_the_step_quarters_the_residual) {
  const FockSpace space(30);
  const auto psi = coherent_state(cplx(1.0, 0.5), space);
  const auto coarse = ehrenfest_check(space, psi, 1.3, 0.8, linspace(0.0, 2.0, 201));
  const auto fine = ehrenfest_check(space, psi, 1.3, 0.8, linspace(0.0, 2.0, 401));
  const double ratio = coarse.max_residual / fine.max_residual;
  EXPECT_GE(ratio, 3.5);
  EXPECT_LE(ratio, 4.5);
}

TEST(Ehrenfest, rejects_states_near_the_cutoff) {
  const FockSpace space(10);
  EXPECT_THROW(ehrenfest_check(space, space.fock_state(6), 1.0, 1.0, linspace(0.0, 1.0, 11)), TruncationError);
  EXPECT_THROW(ehrenfest_check(space, space.vacuum(), 1.0, 1.0, {0.0, 0.1, 0.3}), ArgumentError);
}
