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

#include "decolab/spin_bath.hpp"

#include <gtest/gtest.h>

#include <numbers>

#include "test_util.hpp"

using namespace decolab;
using std::numbers::pi;

namespace {

const double kHalf = 1.0 / std::sqrt(2.0);

}  // namespace

TEST(SpinBathConfig, validates_normalization) {
  EXPECT_THROW(SpinBathConfig(1.0, 1.0, {{1.0, 1.0, 0.0}}), ArgumentError);
  EXPECT_THROW(SpinBathConfig(1.0, 0.0, {{1.0, 1.0, 1.0}}), ArgumentError);
  EXPECT_THROW(SpinBathConfig(1.0, 0.0, {}), ArgumentError);
  EXPECT_THROW(SpinBathConfig(1.0, 0.0, {{std::nan(""), 1.0, 0.0}}), ArgumentError);
}

TEST(DecoherenceFactor, is_one_at_t_zero) {
  Rng rng = make_stream(2, 0);
  EXPECT_EQ(decoherence_factor(random_config(9, rng), 0.0), cplx(1.0));
}

TEST(DecoherenceFactor, single_balanced_spin_vanishes_at_quarter_period) {
  const auto cfg = balanced_config({1.0}, kHalf, kHalf);
  EXPECT_NEAR(std::abs(decoherence_factor(cfg, pi / 4)), 0.0, 1e-15);
}

TEST(DecoherenceFactor, environment_eigenstate_never_decoheres) {
  Rng rng = make_stream(2, 1);
  const auto cfg = eigenstate_config(uniform_couplings(10, rng), kHalf, kHalf);
  for (double t = 0.0; t < 100.0; t += 0.173) EXPECT_NEAR(std::abs(decoherence_factor(cfg, t)), 1.0, 1e-12);
}

TEST(DecoherenceFactor, matches_configuration_sum_expansion) {
  Rng rng = make_stream(2, 2);
  for (std::size_t n = 1; n <= 8; ++n) {
    const auto cfg = random_config(n, rng);
    for (double t : {0.1, 0.7, 2.3, 11.0}) {
      EXPECT_NEAR(std::abs(decoherence_factor(cfg, t) - testutil::configuration_sum(cfg, t)), 0.0, 1e-12)
          << "n=" << n << " t=" << t;
    }
  }
}

TEST(DecoherenceFactor, matches_explicit_branch_overlap) {
  Rng rng = make_stream(2, 3);
  for (std::size_t n : {1, 3, 6, 10}) {
    const auto cfg = random_config(n, rng);
    const double t = uniform(rng, 0.0, 5.0);
    EXPECT_NEAR(std::abs(decoherence_factor(cfg, t) - testutil::branch_overlap(cfg, t)), 0.0, 1e-12);
  }
}

TEST(EnvironmentBranch, reverses_time_between_branches) {
  Rng rng = make_stream(2, 4);
  const auto cfg = random_config(4, rng);
  const auto up = environment_branch(cfg, 0.9, Branch::Up);
  const auto down = environment_branch(cfg, -0.9, Branch::Down);
  EXPECT_LT((up.amps() - down.amps()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(EnvironmentBranch, overlap_reproduces_decoherence_factor) {
  Rng rng = make_stream(2, 5);
  const auto cfg = random_config(3, rng);
  for (double t : {0.0, 0.4, 1.9}) {
    const cplx ov = inner(environment_branch(cfg, t, Branch::Down), environment_branch(cfg, t, Branch::Up));
    EXPECT_NEAR(std::abs(ov - decoherence_factor(cfg, t)), 0.0, 1e-12);
  }
}

TEST(EnvironmentBranch, both_branches_start_in_initial_environment) {
  const auto cfg = balanced_config({0.3, 0.8}, kHalf, kHalf);
  const auto up = environment_branch(cfg, 0.0, Branch::Up);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(std::abs(up[i] - cplx(0.5)), 0.0, 1e-15);
}

TEST(EnvironmentBranch, refuses_oversized_environments) {
  Rng rng = make_stream(2, 6);
  EXPECT_THROW(environment_branch(random_config(16, rng), 1.0, Branch::Up), SizeError);
  EXPECT_NO_THROW(decoherence_factor(random_config(500, rng), 1.0));
}

TEST(ReducedStateA, has_closed_form_entries) {
  const auto cfg = balanced_config({0.4, 1.3}, kHalf, kHalf);
  const auto rho0 = reduced_state_A(cfg, 0.0);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) EXPECT_NEAR(std::abs(rho0(i, j) - 0.5), 0.0, 1e-15);
  }
  const auto pure = reduced_state_A(cfg.with_system(1.0, 0.0), 3.0);
  EXPECT_NEAR(pure(0, 0).real(), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(pure(0, 1)), 0.0, 1e-15);
}

TEST(ReducedStateA, purity_follows_expansion) {
  Rng rng = make_stream(2, 7);
  const auto cfg = random_config(5, rng);
  const double a2 = std::norm(cfg.a()), b2 = std::norm(cfg.b());
  for (double t : {0.3, 1.1}) {
    const double r2 = std::norm(decoherence_factor(cfg, t));
    EXPECT_NEAR(purity(reduced_state_A(cfg, t)), a2 * a2 + b2 * b2 + 2 * a2 * b2 * r2, 1e-14);
  }
}

TEST(ReducedStateA, offdiag_norm_is_twice_modulus_of_coherence) {
  Rng rng = make_stream(2, 8);
  const auto cfg = random_config(5, rng);
  const double t = 0.6;
  const double expect = 2 * std::abs(cfg.a()) * std::abs(cfg.b()) * std::abs(decoherence_factor(cfg, t));
  EXPECT_NEAR(offdiag_norm(reduced_state_A(cfg, t), BasisSpec::z()), expect, 1e-14);
}

TEST(TimeAveragedR2, single_balanced_spin_averages_to_half) {
  const auto cfg = balanced_config({0.7}, kHalf, kHalf);
  EXPECT_NEAR(time_averaged_r2(cfg, resolved_grid(cfg, 500.0)), 0.5, 0.025);
}

TEST(TimeAveragedR2, eight_balanced_spins_average_to_two_to_minus_eight) {
  Rng rng = make_stream(kDefaultSeed, 8);
  const auto cfg = balanced_config(uniform_couplings(8, rng), kHalf, kHalf);
  const double span = std::max(1e6, 50.0 / cfg.min_coupling());
  EXPECT_NEAR(time_averaged_r2(cfg, resolved_grid(cfg, span)), 0.00390625, 0.000390625);
}

TEST(TimeAveragedR2, eigenstate_gives_one) {
  const auto cfg = eigenstate_config({0.3, 0.9}, kHalf, kHalf);
  EXPECT_NEAR(time_averaged_r2(cfg, resolved_grid(cfg, 100.0)), 1.0, 1e-12);
}

TEST(TimeAveragedR2, rejects_short_grids) {
  const auto cfg = balanced_config({1.0}, kHalf, kHalf);
  EXPECT_THROW(time_averaged_r2(cfg, linspace(0.0, 1.0, 99)), ArgumentError);
}

TEST(GaussianFit, recovers_synthetic_rate) {
  std::vector<double> ts;
  std::vector<cplx> r;
  for (int j = 0; j <= 400; ++j) {
    ts.push_back(0.005 * j);
    r.push_back(std::exp(-2.0 * ts.back() * ts.back()));
  }
  const auto fit = fit_gaussian_decay(DecoherenceTrace(ts, r));
  EXPECT_NEAR(fit.rate, 2.0, 1e-12);
  EXPECT_NEAR(fit.r_squared, 1.0, 1e-12);
  EXPECT_LE(fit.t_max, 1.0);
}

TEST(GaussianFit, fifty_spins_decay_as_gaussian) {
  Rng rng = make_stream(2, 9);
  const auto cfg = balanced_config(uniform_couplings(50, rng), kHalf, kHalf);
  const auto fit = fit_gaussian_decay(decoherence_trace(cfg, decay_grid(cfg)));
  EXPECT_GE(fit.r_squared, 0.99);
}

TEST(GaussianFit, small_environments_still_return_a_fit) {
  const auto cfg = balanced_config({0.5, 0.9}, kHalf, kHalf);
  const auto fit = fit_gaussian_decay(decoherence_trace(cfg, linspace(0.0, 10.0, 2001)));
  EXPECT_GE(fit.r_squared, 0.0);
  EXPECT_LE(fit.r_squared, 1.0);
}

TEST(GaussianFit, trace_that_never_decays_is_an_error) {
  const auto cfg = eigenstate_config({1.0}, kHalf, kHalf);
  EXPECT_THROW(fit_gaussian_decay(decoherence_trace(cfg, linspace(0.0, 10.0, 100))), FitWindowError);
}

TEST(Recurrence, integer_couplings_recur_at_pi) {
  const auto cfg = balanced_config({1.0, 2.0, 3.0}, kHalf, kHalf);
  const auto scan = recurrence_scan(cfg, 4.0, 0.01);
  EXPECT_LE(scan.step, pi / 60.0 + 1e-15);
  bool at_pi = false;
  for (const auto& iv : scan.intervals) at_pi = at_pi || (iv.start - scan.step <= pi && pi <= iv.end + scan.step);
  EXPECT_TRUE(at_pi);
}

TEST(Recurrence, eigenstate_recurs_everywhere) {
  const auto cfg = eigenstate_config({1.0, 2.5}, kHalf, kHalf);
  const auto scan = recurrence_scan(cfg, 10.0, 0.01);
  ASSERT_EQ(scan.intervals.size(), 1U);
  EXPECT_EQ(scan.intervals[0].start, 0.0);
  EXPECT_GE(scan.intervals[0].end, 10.0 - scan.step);
}

TEST(Recurrence, rejects_bad_threshold) {
  const auto cfg = balanced_config({1.0}, kHalf, kHalf);
  EXPECT_THROW(recurrence_scan(cfg, 1.0, 0.0), ArgumentError);
  EXPECT_THROW(recurrence_scan(cfg, 1.0, 0.5), ArgumentError);
  EXPECT_THROW(recurrence_scan(cfg, 0.0, 0.1), ArgumentError);
}

TEST(DecoherenceTrace, rejects_impossible_values) {
  EXPECT_THROW(DecoherenceTrace({0.0, 1.0}, {1.0, 1.5}), ArgumentError);
  EXPECT_THROW(DecoherenceTrace({0.0, 1.0}, {0.5, 0.5}), ArgumentError);
}
