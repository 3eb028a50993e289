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
 * Experiment drivers behind the command-line subcommands. Each driver reads a
 * JSON config, runs its sweeps and returns the output files in memory, so the
 * same code serves the executable and the tests. Configuration problems throw
 * ConfigError.
 *
 * Randomness is drawn from streams split off the root seed by a fixed task id,
 * so outputs do not depend on the worker count or scheduling.
 */

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "decolab/cli/config.hpp"
#include "decolab/cli/result_table.hpp"
#include "decolab/decolab.hpp"
#include "decolab/parallel.hpp"

namespace decolab::cli {

struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::size_t workers = default_workers();
};

class RunContext {
 public:
  RunContext(std::string experiment, const std::string& text, const RunOptions& opts)
      : json_(parse_config_text(text)), text_(text), root_(json_, "", text_), workers_(opts.workers) {
    if (root_.string("experiment") != experiment) {
      root_.fail("experiment", "config is for '" + root_.string("experiment") +
                                   "', not '" + experiment + "'");
    }
    seed_ = resolve_seed(root_, opts.seed);
    if (root_.has("out")) out_ = root_.string("out");
    prov_.experiment = std::move(experiment);
    prov_.config_hash = config_hash(json_);
    prov_.seed = seed_;
  }

  const Section& root() const noexcept { return root_; }
  const Provenance& provenance() const noexcept { return prov_; }
  std::size_t workers() const noexcept { return workers_; }
  /// Output directory named in the config, if any; --out takes precedence.
  const std::optional<std::string>& out_dir() const noexcept { return out_; }

  /// Stream for task `id`; randomness without a seed is a config error.
  Rng stream(std::uint64_t id) const {
    if (!seed_) {
      throw ConfigError("config error: this experiment draws random numbers; supply \"seed\", "
                        "DECOLAB_SEED or --seed");
    }
    return make_stream(*seed_, id);
  }

  void emit(std::vector<OutputFile>& out, const ResultTable& t) const {
    out.push_back({t.name() + ".csv", t.to_csv(prov_)});
  }

  void emit_json(std::vector<OutputFile>& out, const std::string& name, nlohmann::json body) const {
    body["provenance"] = prov_.to_json();
    out.push_back({name + ".json", body.dump(2) + "\n"});
  }

 private:
  nlohmann::json json_;
  std::string text_;
  Section root_;
  std::size_t workers_;
  std::optional<std::uint64_t> seed_;
  std::optional<std::string> out_;
  Provenance prov_;
};

namespace detail {

// Stream ids: section tag in the top 16 bits, then N, then a running index.
inline std::uint64_t task_id(std::uint64_t section, std::uint64_t n, std::uint64_t index) {
  return (section << 48) | (n << 32) | index;
}

enum Section_ : std::uint64_t {
  kTrace = 1, kScaling, kFit, kRecurrence, kCollapse, kLuders, kOracle, kPointer
};

inline std::pair<cplx, cplx> system_amplitudes(const Section& root) {
  if (!root.has("system")) {
    const double s = 1.0 / std::sqrt(2.0);
    return {s, s};
  }
  const auto sys = root.child("system");
  const cplx a = sys.complex("a");
  const cplx b = sys.complex("b");
  sys.finish();
  if (std::abs(std::norm(a) + std::norm(b) - 1.0) > 1e-12) {
    sys.fail("", "|a|^2 + |b|^2 must equal 1");
  }
  return {a, b};
}

// Builds the environment for a section: explicit "couplings" in the section,
// else n draws from Uniform(0, 1). Spin amplitudes follow "environment".
inline SpinBathConfig build_bath(const RunContext& ctx, const Section& s, std::optional<std::size_t> n,
                                 std::uint64_t stream_id) {
  const auto [a, b] = system_amplitudes(ctx.root());
  const std::string env = ctx.root().string_or("environment", "balanced");
  if (env != "balanced" && env != "eigenstate" && env != "random") {
    ctx.root().fail("environment", "expected \"balanced\", \"eigenstate\" or \"random\"");
  }
  std::vector<double> g;
  std::optional<Rng> rng;
  if (s.has("couplings")) {
    g = s.numbers("couplings");
    if (n && *n != g.size()) s.fail("couplings", "length does not match n");
  } else {
    if (!n || *n == 0) s.fail("n", "required when \"couplings\" is absent");
    rng.emplace(ctx.stream(stream_id));
    g = uniform_couplings(*n, *rng);
  }
  if (env == "balanced") return balanced_config(g, a, b);
  if (env == "eigenstate") return eigenstate_config(g, a, b);
  if (!rng) rng.emplace(ctx.stream(stream_id));
  std::vector<EnvSpin> spins;
  for (double gk : g) {
    auto [up, down] = random_qubit(*rng);
    spins.push_back({gk, up, down});
  }
  return SpinBathConfig(a, b, std::move(spins));
}

inline std::optional<std::size_t> optional_count(const Section& s, const std::string& key, std::size_t lo) {
  if (!s.has(key)) return std::nullopt;
  return s.count(key, lo);
}

inline double positive(const Section& s, const std::string& key, double def) {
  const double v = s.number_or(key, def);
  if (!(v > 0.0)) s.fail(key, "must be positive");
  return v;
}

inline StateVector state_from_section(const Section& s, const FockSpace* space) {
  if (s.has("fock")) {
    if (!space) s.fail("fock", "Fock states need an n_max");
    const auto n = s.count("fock");
    if (n > space->n_max()) s.fail("fock", "exceeds n_max");
    s.finish();
    return space->fock_state(n);
  }
  if (s.has("coherent")) {
    if (!space) s.fail("coherent", "coherent states need an n_max");
    const cplx alpha = s.complex("coherent");
    s.finish();
    try {
      return coherent_state(alpha, *space);
    } catch (const TruncationError& e) {
      s.fail("coherent", e.what());
    }
  }
  if (s.has("amplitudes")) {
    const auto amps = s.complexes("amplitudes");
    s.finish();
    CVector v(static_cast<Eigen::Index>(amps.size()));
    for (std::size_t i = 0; i < amps.size(); ++i) v(static_cast<Eigen::Index>(i)) = amps[i];
    if (space && amps.size() != space->dim()) s.fail("amplitudes", "length must be n_max + 1");
    try {
      return StateVector::normalized({amps.size()}, v);
    } catch (const Error& e) {
      s.fail("amplitudes", e.what());
    }
  }
  s.fail("", "state needs one of \"fock\", \"coherent\" or \"amplitudes\"");
}

inline nlohmann::json state_dump(const std::string& label, double probability, const DensityMatrix& rho) {
  return {{"label", label}, {"probability", probability}, {"matrix", matrix_to_json(rho.matrix())}};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// spin-bath
// ---------------------------------------------------------------------------

inline std::vector<OutputFile> run_spin_bath(const RunContext& ctx) {
  using namespace detail;
  const Section& root = ctx.root();
  std::vector<OutputFile> out;
  bool ran = false;

  if (root.has("trace")) {
    ran = true;
    const auto s = root.child("trace");
    const auto cfg = build_bath(ctx, s, optional_count(s, "n", 1), task_id(kTrace, 0, 0));
    const double t_max = positive(s, "t_max", 10.0);
    const auto samples = s.count_or("samples", 1001, 2);
    s.finish();
    const auto trace = decoherence_trace(cfg, linspace(0.0, t_max, samples));
    ResultTable t("r_trace", {"t", "re_r", "im_r", "abs_r2"});
    for (std::size_t j = 0; j < trace.size(); ++j) {
      const cplx r = trace.r().values[j];
      t.add_row({trace.r().times[j], r.real(), r.imag(), trace.r2().values[j]});
    }
    ctx.emit(out, t);
  }

  if (root.has("scaling")) {
    ran = true;
    const auto s = root.child("scaling");
    const auto n_list = s.counts("n_list", 1);
    const double span = positive(s, "span", 1e6);
    s.finish();
    struct Row { std::size_t n; double mean; std::size_t samples; double span; };
    const auto rows = parallel_map(n_list.size(), ctx.workers(), [&](std::size_t i) {
      const std::size_t n = n_list[i];
      const auto cfg = build_bath(ctx, s, n, task_id(kScaling, n, i));
      const double g_min = cfg.min_coupling();
      const double horizon = g_min > 0.0 ? std::max(span, 50.0 / g_min) : span;
      const auto grid = resolved_grid(cfg, horizon);
      return Row{n, time_averaged_r2(cfg, grid), grid.size(), horizon};
    });
    ResultTable t("scaling", {"n", "mean_r2", "log2_mean", "log2_plus_n", "samples", "span"});
    for (const auto& r : rows) {
      const double l = std::log2(r.mean);
      t.add_row({static_cast<std::int64_t>(r.n), r.mean, l, l + static_cast<double>(r.n),
                 static_cast<std::int64_t>(r.samples), r.span});
    }
    ctx.emit(out, t);
  }

  if (root.has("fit")) {
    ran = true;
    const auto s = root.child("fit");
    const auto n_list = s.counts("n_list", 1);
    const auto seeds = s.count_or("seeds", 20, 1);
    const auto per_width = s.count_or("samples_per_width", 200, 10);
    s.finish();
    const std::size_t total = n_list.size() * seeds;
    const auto fits = parallel_map(total, ctx.workers(), [&](std::size_t i) {
      const std::size_t n = n_list[i / seeds];
      const auto cfg = build_bath(ctx, s, n, task_id(kFit, n, i % seeds));
      return fit_gaussian_decay(decoherence_trace(cfg, decay_grid(cfg, per_width)));
    });
    ResultTable t("fit", {"n", "stream", "gamma", "r_squared", "t_max", "samples"});
    for (std::size_t i = 0; i < total; ++i) {
      t.add_row({static_cast<std::int64_t>(n_list[i / seeds]), static_cast<std::int64_t>(i % seeds),
                 fits[i].rate, fits[i].r_squared, fits[i].t_max, static_cast<std::int64_t>(fits[i].samples)});
    }
    ctx.emit(out, t);
  }

  if (root.has("recurrence")) {
    ran = true;
    const auto s = root.child("recurrence");
    const auto cfg = build_bath(ctx, s, optional_count(s, "n", 1), task_id(kRecurrence, 0, 0));
    const double horizon = positive(s, "horizon", 10.0);
    const double eps = s.number_or("epsilon", 0.01);
    if (!(eps > 0.0 && eps < 0.5)) s.fail("epsilon", "must lie in (0, 0.5)");
    s.finish();
    const auto scan = recurrence_scan(cfg, horizon, eps);
    ResultTable t("recurrence", {"start", "end", "peak_time", "peak_modulus", "step"});
    for (const auto& iv : scan.intervals) t.add_row({iv.start, iv.end, iv.peak_time, iv.peak_modulus, scan.step});
    ctx.emit(out, t);
  }

  // Shared keys stay valid even when no section reads them.
  root.has("environment");
  root.has("system");
  if (!ran) root.fail("", "nothing to run: add one of \"trace\", \"scaling\", \"fit\", \"recurrence\"");
  root.finish();
  return out;
}

// ---------------------------------------------------------------------------
// measure
// ---------------------------------------------------------------------------

inline std::vector<OutputFile> run_measure(const RunContext& ctx) {
  using namespace detail;
  const Section& root = ctx.root();
  std::vector<OutputFile> out;
  nlohmann::json dumps = nlohmann::json::object();
  bool ran = false;

  if (root.has("collapse")) {
    ran = true;
    const auto s = root.child("collapse");
    const cplx a = s.complex("a");
    const cplx b = s.complex("b");
    const auto shots = s.count_or("shots", 10000, 1);
    s.finish();
    if (std::abs(std::norm(a) + std::norm(b) - 1.0) > 1e-12) s.fail("a", "|a|^2 + |b|^2 must equal 1");
    const auto joint = premeasure_cnot(StateVector::qubit(a, b), StateVector::qubit(1.0, 0.0));
    const auto pointer = BasisSpec::z(1);
    const auto probs = born_weights(joint, pointer);
    Rng rng = ctx.stream(task_id(kCollapse, 0, 0));
    const auto counts = sample_counts(joint, pointer, shots, rng());
    const auto chi = chi_square_test(counts, probs);
    const char* labels[] = {"+,up", "-,down"};
    ResultTable t("collapse", {"outcome", "label", "count", "frequency", "probability", "sigma", "z_score",
                               "chi2_p_value"});
    nlohmann::json states = nlohmann::json::array();
    for (std::size_t i = 0; i < probs.size(); ++i) {
      const double n = static_cast<double>(shots);
      const double f = static_cast<double>(counts[i]) / n;
      const double sigma = std::sqrt(probs[i] * (1.0 - probs[i]) / n);
      const double z = sigma > 0.0 ? (f - probs[i]) / sigma : 0.0;
      t.add_row({static_cast<std::int64_t>(i), std::string(labels[i]), static_cast<std::int64_t>(counts[i]), f,
                 probs[i], sigma, z, chi.p_value});
      if (probs[i] > kImpossibleProbability) {
        CMatrix proj = CMatrix::Zero(2, 2);
        proj(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1.0;
        const Projector pointer_proj(kron(CMatrix(CMatrix::Identity(2, 2)), proj));
        states.push_back(state_dump(labels[i], probs[i],
                                    luders_update(DensityMatrix::from_pure(joint), pointer_proj)));
      }
    }
    dumps["collapse"] = std::move(states);
    ctx.emit(out, t);
  }

  if (root.has("luders")) {
    ran = true;
    const auto s = root.child("luders");
    const auto psi = state_from_section(s.child("state"), nullptr);
    const auto indices = s.counts("projector");
    const auto trials = s.count_or("trials", 100, 1);
    s.finish();
    std::optional<Projector> p;
    try {
      p.emplace(Projector::computational(psi.dim(), indices));
    } catch (const Error& e) {
      s.fail("projector", e.what());
    }
    const KrausSet pair = KrausSet::projective(*p);
    const auto rho = DensityMatrix::from_pure(psi);
    const auto first_probs = povm_probabilities(rho, pair);
    Rng rng = ctx.stream(task_id(kLuders, 0, 0));
    ResultTable t("luders", {"trial", "first_outcome", "first_probability", "repeat_outcome",
                             "repeat_probability", "identical"});
    nlohmann::json states = nlohmann::json::array();
    std::vector<bool> dumped(2, false);
    for (std::size_t k = 0; k < trials; ++k) {
      const std::size_t first = decolab::detail::sample_index(first_probs, rng);
      const auto rec = kraus_update(rho, pair, first);
      const auto repeat_probs = povm_probabilities(rec.post_state, pair);
      const std::size_t second = decolab::detail::sample_index(repeat_probs, rng);
      t.add_row({static_cast<std::int64_t>(k), pair.labels()[first], first_probs[first], pair.labels()[second],
                 repeat_probs[second], static_cast<std::int64_t>(first == second)});
      if (!dumped[first]) {
        dumped[first] = true;
        states.push_back(state_dump(rec.label, rec.probability, rec.post_state));
      }
    }
    dumps["luders"] = std::move(states);
    ctx.emit(out, t);
  }

  if (root.has("kraus")) {
    ran = true;
    const auto s = root.child("kraus");
    std::optional<FockSpace> space;
    std::optional<KrausSet> set;
    const auto& spec = s.raw("set");
    if (spec.is_string()) {
      if (spec.get<std::string>() != "photon_counting") s.fail("set", "unknown named set");
      space.emplace(s.count_or("n_max", kDefaultFockCutoff, 1));
      set.emplace(photon_counting_set(*space));
    } else {
      try {
        if (spec.is_object() && spec.contains("file")) {
          std::ifstream in(spec["file"].get<std::string>());
          if (!in) s.fail("set", "cannot open Kraus file '" + spec["file"].get<std::string>() + "'");
          set.emplace(kraus_from_json(nlohmann::json::parse(in)));
        } else {
          set.emplace(kraus_from_json(spec));
        }
      } catch (const Error& e) {
        s.fail("set", e.what());
      } catch (const nlohmann::json::exception& e) {
        s.fail("set", e.what());
      }
      if (s.has("n_max")) space.emplace(s.count("n_max", 1));
    }
    const auto psi = state_from_section(s.child("state"), space ? &*space : nullptr);
    s.finish();
    if (psi.dim() != set->dim()) s.fail("state", "dimension does not match the Kraus set");
    const auto rho = DensityMatrix::from_pure(psi);
    const auto probs = povm_probabilities(rho, *set);
    const auto report = validate_kraus(*set);
    ResultTable t("kraus", {"outcome", "label", "probability", "post_purity", "post_vacuum_fidelity",
                            "completeness_deviation"});
    nlohmann::json states = nlohmann::json::array();
    for (std::size_t i = 0; i < probs.size(); ++i) {
      if (probs[i] <= kImpossibleProbability) continue;
      const auto rec = kraus_update(rho, *set, i);
      const double vac = rec.post_state(0, 0).real();
      t.add_row({static_cast<std::int64_t>(i), rec.label, rec.probability, purity(rec.post_state), vac,
                 report.deviation});
      states.push_back(state_dump(rec.label, rec.probability, rec.post_state));
    }
    dumps["kraus"] = std::move(states);
    ctx.emit(out, t);
  }

  if (!ran) root.fail("", "nothing to run: add one of \"collapse\", \"luders\", \"kraus\"");
  root.finish();
  ctx.emit_json(out, "post_states", std::move(dumps));
  return out;
}

// ---------------------------------------------------------------------------
// pointer
// ---------------------------------------------------------------------------

namespace detail {

inline std::pair<BasisSpec, std::string> candidate_basis(const Section& s, std::size_t i) {
  const auto& v = s.raw("candidates")[i];
  if (v.is_string()) {
    const auto name = v.get<std::string>();
    if (name == "z") return {BasisSpec::z(), name};
    if (name == "x") return {BasisSpec::x(), name};
  } else if (v.is_object() && v.size() == 1 && v.contains("theta") && v["theta"].is_number()) {
    const double th = v["theta"].get<double>();
    return {BasisSpec::rotated(th), "theta=" + format_double(th)};
  }
  s.fail("candidates", "each candidate is \"z\", \"x\" or {\"theta\": angle}");
}

}  // namespace detail

inline std::vector<OutputFile> run_pointer(const RunContext& ctx) {
  using namespace detail;
  const Section& root = ctx.root();
  std::vector<OutputFile> out;
  bool ran = false;

  if (root.has("correlation")) {
    ran = true;
    const auto s = root.child("correlation");
    const auto n = optional_count(s, "n", 1);
    const auto bath = build_bath(ctx, s, n, task_id(kPointer, 0, 0));
    if (bath.size() > kMaxTriSpins) s.fail("n", "at most " + std::to_string(kMaxTriSpins) + " spins");
    const auto thetas = s.numbers("thetas");
    for (double th : thetas) {
      if (!(th >= 0.0 && th <= std::numbers::pi / 2)) s.fail("thetas", "angles must lie in [0, pi/2]");
    }
    const double t_max = positive(s, "t_max", 5.0);
    const auto samples = s.count_or("samples", 51, 2);
    s.finish();
    const TriConfig cfg{bath};
    const auto grid = linspace(0.0, t_max, samples);
    const auto series = parallel_map(thetas.size(), ctx.workers(), [&](std::size_t i) {
      return basis_correlation_decay(cfg, thetas[i], grid);
    });
    const double ab = std::abs(cfg.a()) * std::abs(cfg.b());
    ResultTable t("correlation", {"theta", "t", "correlation", "abs_r", "closed_form"});
    for (std::size_t i = 0; i < thetas.size(); ++i) {
      const double c2 = std::cos(2.0 * thetas[i]);
      const double s2 = std::sin(2.0 * thetas[i]);
      for (std::size_t j = 0; j < grid.size(); ++j) {
        const double r = std::abs(decoherence_factor(bath, grid[j]));
        t.add_row({thetas[i], grid[j], series[i].values[j], r,
                   std::sqrt(c2 * c2 + 4.0 * ab * ab * r * r * s2 * s2)});
      }
    }
    ctx.emit(out, t);
  }

  if (root.has("sieve")) {
    ran = true;
    const auto s = root.child("sieve");
    const auto env = build_bath(ctx, s, optional_count(s, "n", 1), task_id(kPointer, 0, 1));
    const auto count = s.raw("candidates").is_array() ? s.raw("candidates").size() : 0;
    if (count == 0) s.fail("candidates", "expected a non-empty array");
    std::vector<BasisSpec> bases;
    std::vector<std::string> names;
    for (std::size_t i = 0; i < count; ++i) {
      auto [b, name] = candidate_basis(s, i);
      bases.push_back(std::move(b));
      names.push_back(std::move(name));
    }
    const double t_max = positive(s, "t_max", 20.0);
    const auto samples = s.count_or("samples", 401, 2);
    s.finish();
    const auto ranking = predictability_sieve(bases, env, linspace(0.0, t_max, samples));
    ResultTable t("sieve", {"rank", "candidate", "name", "score"});
    for (std::size_t k = 0; k < ranking.size(); ++k) {
      t.add_row({static_cast<std::int64_t>(k + 1), static_cast<std::int64_t>(ranking[k].candidate),
                 names[ranking[k].candidate], ranking[k].score});
    }
    ctx.emit(out, t);
  }

  if (root.has("apparatus")) {
    ran = true;
    const auto s = root.child("apparatus");
    const auto amps = s.complexes("amplitudes");
    const auto rates = s.numbers("rates");
    const std::vector<double> weights = s.has("weights") ? s.numbers("weights") : std::vector<double>{};
    const double t_max = positive(s, "t_max", 5.0);
    const auto samples = s.count_or("samples", 51, 2);
    s.finish();
    CVector c(static_cast<Eigen::Index>(amps.size()));
    for (std::size_t i = 0; i < amps.size(); ++i) c(static_cast<Eigen::Index>(i)) = amps[i];
    std::optional<ApparatusModel> model;
    try {
      model.emplace(exponential_decay_model(c, rates, weights));
    } catch (const Error& e) {
      s.fail("", e.what());
    }
    const auto& w = model->weights();
    const auto basis = BasisSpec::computational(amps.size());
    ResultTable t("apparatus", {"t", "offdiag_norm", "closed_form"});
    for (double time : linspace(0.0, t_max, samples)) {
      double mix = 0.0;
      for (std::size_t j = 0; j < rates.size(); ++j) mix += w[j] * std::exp(-rates[j] * time);
      double cross = 0.0;
      for (std::size_t i = 0; i < amps.size(); ++i) {
        for (std::size_t k = 0; k < amps.size(); ++k) {
          if (i != k) cross += std::abs(amps[i]) * std::abs(amps[k]);
        }
      }
      t.add_row({time, offdiag_norm(apparatus_reduced_state(*model, time), basis), cross * mix});
    }
    ctx.emit(out, t);
  }

  root.has("environment");
  root.has("system");
  if (!ran) root.fail("", "nothing to run: add one of \"correlation\", \"sieve\", \"apparatus\"");
  root.finish();
  return out;
}

// ---------------------------------------------------------------------------
// fock
// ---------------------------------------------------------------------------

inline std::vector<OutputFile> run_fock(const RunContext& ctx) {
  using namespace detail;
  const Section& root = ctx.root();
  std::vector<OutputFile> out;
  bool ran = false;
  const FockSpace space(root.count_or("n_max", kDefaultFockCutoff, 1));

  if (root.has("ehrenfest")) {
    ran = true;
    const auto s = root.child("ehrenfest");
    const auto initial = state_from_section(s.child("initial"), &space);
    const double omega = positive(s, "omega", 1.0);
    const double mass = positive(s, "mass", 1.0);
    const double dt = positive(s, "dt", 0.01);
    const auto steps = s.count_or("steps", 200, 2);
    const auto halvings = s.count_or("halvings", 1);
    s.finish();
    ResultTable trace("ehrenfest", {"t", "mean_x", "mean_p"});
    ResultTable summary("ehrenfest_summary", {"dt", "samples", "max_residual", "ratio_to_previous"});
    double previous = 0.0;
    for (std::size_t h = 0; h <= halvings; ++h) {
      const std::size_t scale = std::size_t{1} << h;
      const double step = dt / static_cast<double>(scale);
      std::vector<double> grid(steps * scale + 1);
      for (std::size_t j = 0; j < grid.size(); ++j) grid[j] = step * static_cast<double>(j);
      EhrenfestReport rep;
      try {
        rep = ehrenfest_check(space, initial, omega, mass, grid);
      } catch (const Error& e) {
        s.fail("initial", e.what());
      }
      if (h == 0) {
        for (std::size_t j = 0; j < rep.times.size(); ++j) trace.add_row({rep.times[j], rep.mean_x[j], rep.mean_p[j]});
      }
      summary.add_row({step, static_cast<std::int64_t>(rep.samples), rep.max_residual,
                       h == 0 ? Cell(std::string()) : Cell(previous / rep.max_residual)});
      previous = rep.max_residual;
    }
    ctx.emit(out, trace);
    ctx.emit(out, summary);
  }

  if (root.has("completeness")) {
    ran = true;
    const auto s = root.child("completeness");
    const FockSpace small(s.count_or("n_max", 10, 1));
    const double radius = positive(s, "radius", kDefaultGridRadius);
    const auto densities = s.counts("densities", 1);
    const double tol = positive(s, "tolerance", 0.02);
    s.finish();
    if (radius < 2.0 * std::sqrt(static_cast<double>(small.n_max()))) s.fail("radius", "must be at least 2 sqrt(n_max)");
    const auto reports = parallel_map(densities.size(), ctx.workers(), [&](std::size_t i) {
      return validate_kraus(coherent_measurement_set(polar_grid(radius, densities[i], densities[i]), small), tol);
    });
    ResultTable t("completeness", {"radial", "angular", "operators", "deviation", "passed"});
    for (std::size_t i = 0; i < densities.size(); ++i) {
      t.add_row({static_cast<std::int64_t>(densities[i]), static_cast<std::int64_t>(densities[i]),
                 static_cast<std::int64_t>(densities[i] * densities[i]), reports[i].deviation,
                 static_cast<std::int64_t>(reports[i].passed)});
    }
    ctx.emit(out, t);
  }

  if (root.has("photon_counting")) {
    ran = true;
    const auto s = root.child("photon_counting");
    const auto psi = state_from_section(s.child("state"), &space);
    s.finish();
    const auto set = photon_counting_set(space);
    const auto rho = DensityMatrix::from_pure(psi);
    const auto probs = povm_probabilities(rho, set);
    ResultTable t("photon_counting", {"outcome", "probability", "post_vacuum_fidelity"});
    for (std::size_t n = 0; n < probs.size(); ++n) {
      if (probs[n] <= kImpossibleProbability) continue;
      const auto rec = kraus_update(rho, set, n);
      t.add_row({static_cast<std::int64_t>(n), probs[n], rec.post_state(0, 0).real()});
    }
    ctx.emit(out, t);
  }

  if (!ran) root.fail("", "nothing to run: add one of \"ehrenfest\", \"completeness\", \"photon_counting\"");
  root.finish();
  return out;
}

// ---------------------------------------------------------------------------
// oracle-compare
// ---------------------------------------------------------------------------

inline constexpr double kOracleTolerance = 1e-10;

inline std::vector<OutputFile> run_oracle_compare(const RunContext& ctx) {
  using namespace detail;
  const Section& root = ctx.root();
  const auto n_list = root.counts("n_list", 1);
  for (auto n : n_list) {
    if (n > kMaxOracleSpins) root.fail("n_list", "at most " + std::to_string(kMaxOracleSpins) + " spins");
  }
  const auto trials = root.count_or("trials", 100, 1);
  const auto times = root.count_or("times", 20, 1);
  const double t_max = positive(root, "t_max", 10.0);
  root.finish();

  struct Sample { std::size_t n; double t; cplx analytic; cplx oracle; };
  const auto runs = parallel_map(trials, ctx.workers(), [&](std::size_t k) {
    const std::size_t n = n_list[k % n_list.size()];
    Rng rng = ctx.stream(task_id(kOracle, n, k));
    const auto cfg = random_config(n, rng);
    std::vector<Sample> rows;
    for (std::size_t j = 0; j < times; ++j) {
      const double t = uniform(rng, 0.0, t_max);
      rows.push_back({n, t, decoherence_factor(cfg, t), oracle_r(cfg, t)});
    }
    return rows;
  });

  std::vector<OutputFile> out;
  ResultTable t("oracle_compare", {"trial", "n", "t", "analytic_re", "analytic_im", "oracle_re", "oracle_im",
                                   "deviation"});
  double worst = 0.0;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    for (const auto& r : runs[k]) {
      const double dev = std::abs(r.analytic - r.oracle);
      worst = std::max(worst, dev);
      t.add_row({static_cast<std::int64_t>(k), static_cast<std::int64_t>(r.n), r.t, r.analytic.real(),
                 r.analytic.imag(), r.oracle.real(), r.oracle.imag(), dev});
    }
  }
  ResultTable summary("oracle_summary", {"trials", "samples", "max_deviation", "tolerance", "passed"});
  summary.add_row({static_cast<std::int64_t>(trials), static_cast<std::int64_t>(trials * times), worst,
                   kOracleTolerance, static_cast<std::int64_t>(worst <= kOracleTolerance)});
  ctx.emit(out, t);
  ctx.emit(out, summary);
  return out;
}

// ---------------------------------------------------------------------------
// Dispatch
// ---------------------------------------------------------------------------

inline const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {"spin-bath", "measure", "pointer", "fock", "oracle-compare"};
  return names;
}

/// Runs one experiment in an existing context. Library argument errors raised
/// while reading the config surface as ConfigError.
inline std::vector<OutputFile> run_experiment(const std::string& name, const RunContext& ctx) {
  try {
    if (name == "spin-bath") return run_spin_bath(ctx);
    if (name == "measure") return run_measure(ctx);
    if (name == "pointer") return run_pointer(ctx);
    if (name == "fock") return run_fock(ctx);
    if (name == "oracle-compare") return run_oracle_compare(ctx);
  } catch (const ArgumentError& e) {
    throw ConfigError(std::string("config error: ") + e.what());
  } catch (const SizeError& e) {
    throw ConfigError(std::string("config error: ") + e.what());
  }
  throw ConfigError("unknown experiment '" + name + "'");
}

inline std::vector<OutputFile> run_experiment(const std::string& name, const std::string& text,
                                              const RunOptions& opts = {}) {
  return run_experiment(name, RunContext(name, text, opts));
}

}  // namespace decolab::cli
