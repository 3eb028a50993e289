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

#include "decolab/oracle.hpp"

#include <gtest/gtest.h>

#include "decolab/fock.hpp"
#include "test_util.hpp"

using namespace decolab;

TEST(EvolveDiagonal, zero_time_is_identity) {
  const DiagonalHamiltonian h({2, 2}, {1.0, -2.0, 0.5, 3.0});
  const auto psi = StateVector::normalized({2, 2}, CVector::Ones(4));
  EXPECT_LT((evolve_diagonal(h, psi, 0.0).amps() - psi.amps()).norm(), 1e-15);
}

TEST(EvolveDiagonal, single_spin_reproduces_branch_phases) {
  // A (x) E for one environment spin: amplitudes a alpha e^{ig t}, a beta e^{-ig t},
  // b alpha e^{-ig t}, b beta e^{ig t}.
  const double g = 0.7, t = 1.3;
  const cplx a(0.6, 0.0), b(0.0, 0.8), al(0.28, 0.0), be(0.0, 0.96);
  const SpinBathConfig cfg(a, b, {{g, al, be}});
  const auto psi = evolve_diagonal(spin_bath_hamiltonian(cfg), spin_bath_initial_state(cfg), t);
  const cplx e = std::polar(1.0, g * t);
  const cplx expect[4] = {a * al * e, a * be * std::conj(e), b * al * std::conj(e), b * be * e};
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(std::abs(psi[i] - expect[i]), 0.0, 1e-15) << i;
}

TEST(EvolveDiagonal, preserves_norm) {
  Rng rng = make_stream(3, 0);
  const auto cfg = random_config(8, rng);
  const auto psi = evolve_diagonal(spin_bath_hamiltonian(cfg), spin_bath_initial_state(cfg), 17.0);
  EXPECT_NEAR(psi.amps().squaredNorm(), 1.0, 1e-13);
}

TEST(EvolveDense, zero_hamiltonian_is_identity) {
  const auto psi = StateVector::qubit(0.6, 0.8);
  EXPECT_LT((evolve_dense(CMatrix::Zero(2, 2), psi, 5.0).amps() - psi.amps()).norm(), 1e-15);
}

TEST(EvolveDense, agrees_with_diagonal_evolution) {
  Rng rng = make_stream(3, 1);
  const auto cfg = random_config(5, rng);
  const auto h = spin_bath_hamiltonian(cfg);
  CMatrix dense = CMatrix::Zero(64, 64);
  for (Eigen::Index i = 0; i < 64; ++i) dense(i, i) = h.energies()[static_cast<std::size_t>(i)];
  const auto psi0 = spin_bath_initial_state(cfg);
  EXPECT_LT((evolve_dense(dense, psi0, 2.1).amps() - evolve_diagonal(h, psi0, 2.1).amps()).norm(), 1e-12);
}

TEST(EvolveDense, rotates_coherent_state_amplitude) {
  const FockSpace space(30);
  const cplx alpha(1.0, 0.3);
  const double t = 0.9;
  const auto psi = evolve_dense(space.number(), coherent_state(alpha, space), t);
  const auto expect = coherent_state(alpha * std::polar(1.0, -t), space);
  EXPECT_GT(std::abs(inner(expect, psi)), 1.0 - 1e-12);
}

TEST(EvolveDense, rejects_non_hermitian) {
  CMatrix h = CMatrix::Zero(2, 2);
  h(0, 1) = 1.0;
  EXPECT_THROW(DenseEvolver{h}, ArgumentError);
}

TEST(OracleR, matches_closed_form_for_random_configs) {
  Rng rng = make_stream(3, 2);
  for (int trial = 0; trial < 30; ++trial) {
    const auto cfg = random_config(2 + trial % 9, rng);
    const double t = uniform(rng, 0.0, 10.0);
    EXPECT_NEAR(std::abs(oracle_r(cfg, t) - decoherence_factor(cfg, t)), 0.0, 1e-10);
  }
}

TEST(OracleR, reduced_state_matches_entrywise) {
  Rng rng = make_stream(3, 3);
  const auto cfg = random_config(6, rng);
  EXPECT_LT(detail::max_abs(oracle_reduced_state(cfg, 0.77).matrix() - reduced_state_A(cfg, 0.77).matrix()), 1e-10);
}

TEST(OracleR, is_one_at_zero_and_unimodular_for_eigenstates) {
  Rng rng = make_stream(3, 4);
  EXPECT_NEAR(std::abs(oracle_r(random_config(4, rng), 0.0) - cplx(1.0)), 0.0, 1e-14);
  const auto eig = eigenstate_config({0.4, 1.1, 2.3}, 0.6, 0.8);
  for (double t : {0.5, 3.0, 40.0}) EXPECT_NEAR(std::abs(oracle_r(eig, t)), 1.0, 1e-12);
}

TEST(OracleR, undefined_without_superposition) {
  const auto cfg = balanced_config({1.0}, 1.0, 0.0);
  EXPECT_THROW(oracle_r(cfg, 1.0), UndefinedRatioError);
}

TEST(OracleR, caps_environment_size) {
  Rng rng = make_stream(3, 5);
  EXPECT_THROW(oracle_r(random_config(kMaxOracleSpins + 1, rng), 1.0), SizeError);
}
