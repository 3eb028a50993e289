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

// decolab: run decoherence experiments from JSON configs and write CSV/JSON.
//
// Exit codes: 0 success, 1 invariant failure, 2 usage or config error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "decolab/cli/checks.hpp"
#include "decolab/cli/experiments.hpp"

namespace fs = std::filesystem;
using namespace decolab::cli;

namespace {

constexpr int kOk = 0;
constexpr int kInvariantFailure = 1;
constexpr int kUsageError = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_outputs(const fs::path& dir, const std::vector<OutputFile>& files, bool quiet) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + dir.string() + "': " + ec.message());
  for (const auto& f : files) {
    const fs::path p = dir / f.name;
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << f.contents;
    if (!out) throw ConfigError("cannot write '" + p.string() + "'");
    if (!quiet) std::cout << "wrote " << p.string() << '\n';
  }
}

int report_checks(const std::vector<CheckResult>& results, bool quiet) {
  bool ok = true;
  for (const auto& r : results) {
    ok = ok && r.passed;
    if (!quiet || !r.passed) {
      std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << "  value=" << format_double(r.value)
                << " tol=" << format_double(r.tolerance) << '\n';
    }
  }
  return ok ? kOk : kInvariantFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decoherence and measurement experiments", "decolab"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir;
  std::string seed_text;
  std::size_t workers = decolab::default_workers();
  bool quiet = false;
  bool check = false;
  app.add_option("--config", config_path, "JSON experiment config")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory (default: config \"out\", else ./decolab-out)");
  app.add_option("--seed", seed_text, "root seed; overrides DECOLAB_SEED and the config");
  app.add_option("--workers", workers, "worker threads for sweeps")->check(CLI::PositiveNumber);
  app.add_flag("--quiet", quiet, "print nothing on success");
  app.add_flag("--check", check, "re-run the invariant suite after the experiment");

  for (const auto& name : experiment_names()) app.add_subcommand(name, "run the " + name + " experiment");
  app.add_subcommand("check", "run the invariant suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsageError;
  }

  const std::string sub = app.get_subcommands().front()->get_name();
  try {
    std::optional<std::uint64_t> seed;
    if (!seed_text.empty()) seed = parse_seed(seed_text, "--seed");

    if (sub == "check") {
      if (!config_path.empty()) throw ConfigError("check takes no --config");
      return report_checks(run_checks(seed.value_or(decolab::kDefaultSeed)), quiet);
    }

    if (config_path.empty()) throw ConfigError(sub + " requires --config PATH");
    const RunContext ctx(sub, read_file(config_path), RunOptions{seed, workers});
    const auto files = run_experiment(sub, ctx);
    const fs::path dir = !out_dir.empty() ? fs::path(out_dir) : fs::path(ctx.out_dir().value_or("decolab-out"));
    write_outputs(dir, files, quiet);
    if (check) return report_checks(run_checks(), quiet);
    return kOk;
  } catch (const ConfigError& e) {
    std::cerr << "decolab " << sub << ": " << e.what() << '\n';
    return kUsageError;
  } catch (const decolab::Error& e) {
    std::cerr << "decolab " << sub << ": invariant failure: " << e.what() << '\n';
    return kInvariantFailure;
  }
}
