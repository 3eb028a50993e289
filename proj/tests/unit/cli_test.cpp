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

#include "decolab/cli/experiments.hpp"

#include <gtest/gtest.h>

#include <clocale>
#include <cstdlib>
#include <map>

#include "decolab/cli/checks.hpp"

using namespace decolab::cli;

namespace {

using Table = std::vector<std::map<std::string, std::string>>;

const OutputFile& find(const std::vector<OutputFile>& files, const std::string& name) {
  for (const auto& f : files) {
    if (f.name == name) return f;
  }
  throw std::runtime_error("missing output " + name);
}

// Splits a CSV body (after the '#' block) into header-keyed rows. Values in
// these tests never contain quotes or commas except the collapse labels,
// which are handled by the quote state.
Table parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> header;
  Table rows;
  auto split = [](const std::string& s) {
    std::vector<std::string> out(1);
    bool quoted = false;
    for (char c : s) {
      if (c == '"') {
        quoted = !quoted;
      } else if (c == ',' && !quoted) {
        out.emplace_back();
      } else {
        out.back() += c;
      }
    }
    return out;
  };
  while (std::getline(in, line)) {
    if (line.rfind("# ", 0) == 0) continue;
    const auto cells = split(line);
    if (header.empty()) {
      header = cells;
      continue;
    }
    std::map<std::string, std::string> row;
    for (std::size_t i = 0; i < header.size(); ++i) row[header[i]] = cells.at(i);
    rows.push_back(std::move(row));
  }
  return rows;
}

double num(const std::map<std::string, std::string>& row, const std::string& key) { return std::stod(row.at(key)); }

}  // namespace

TEST(Config, empty_and_malformed_text_is_a_config_error) {
  EXPECT_THROW(run_experiment("spin-bath", ""), ConfigError);
  EXPECT_THROW(run_experiment("spin-bath", "{}"), ConfigError);
  EXPECT_THROW(run_experiment("spin-bath", "[1, 2]"), ConfigError);
  try {
    run_experiment("spin-bath", "{\n  \"experiment\": \"spin-bath\",\n  \"trace\": {\"n\": 3,,}\n}");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(Config, unknown_keys_report_their_line) {
  const std::string text =
      "{\n  \"experiment\": \"fock\",\n  \"photon_counting\": {\n"
      "    \"stat\": {},\n    \"state\": {\"fock\": 1}\n  }\n}";
  try {
    run_experiment("fock", text);
    FAIL();
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("/photon_counting"), std::string::npos) << msg;
    EXPECT_NE(msg.find("line 4"), std::string::npos) << msg;
  }
}

TEST(Config, experiment_name_must_match_subcommand) {
  EXPECT_THROW(run_experiment("fock", R"({"experiment": "measure", "collapse": {"a": 1, "b": 0}})"), ConfigError);
}

TEST(Config, randomness_without_seed_is_rejected) {
  ::unsetenv("DECOLAB_SEED");
  EXPECT_THROW(run_experiment("spin-bath", R"({"experiment": "spin-bath", "trace": {"n": 4}})"), ConfigError);
  EXPECT_NO_THROW(run_experiment("spin-bath", R"({"experiment": "spin-bath", "trace": {"couplings": [1, 2]}})"));
}

TEST(Config, seed_precedence_is_flag_then_environment_then_config) {
  const std::string text = R"({"experiment": "spin-bath", "seed": 5, "trace": {"n": 3, "samples": 3}})";
  auto seed_line = [](const std::vector<OutputFile>& files) {
    const auto& c = files.front().contents;
    const auto pos = c.find("# seed: ");
    return c.substr(pos, c.find('\n', pos) - pos);
  };
  ::unsetenv("DECOLAB_SEED");
  EXPECT_EQ(seed_line(run_experiment("spin-bath", text)), "# seed: 5");
  ::setenv("DECOLAB_SEED", "6", 1);
  EXPECT_EQ(seed_line(run_experiment("spin-bath", text)), "# seed: 6");
  EXPECT_EQ(seed_line(run_experiment("spin-bath", text, {7, 1})), "# seed: 7");
  ::setenv("DECOLAB_SEED", "not-a-number", 1);
  EXPECT_THROW(run_experiment("spin-bath", text), ConfigError);
  ::unsetenv("DECOLAB_SEED");
}

TEST(ResultTable, formats_full_precision_with_provenance) {
  ResultTable t("demo", {"x", "label"});
  t.add_row({0.1, std::string("a,b")});
  t.add_row({std::int64_t{3}, std::string("plain")});
  EXPECT_THROW(t.add_row({1.0}), decolab::ArgumentError);
  Provenance p{"demo", "0123456789abcdef", 42};
  EXPECT_EQ(t.to_csv(p),
            "# experiment: demo\n# config_hash: 0123456789abcdef\n# seed: 42\n# version: decolab 1.0.0\n"
            "x,label\n0.10000000000000001,\"a,b\"\n3,plain\n");
}

TEST(ResultTable, decimal_separator_ignores_locale) {
  const char* old = std::setlocale(LC_NUMERIC, nullptr);
  const std::string saved = old ? old : "C";
  if (std::setlocale(LC_NUMERIC, "de_DE.UTF-8") == nullptr) GTEST_SKIP() << "de_DE locale not installed";
  EXPECT_EQ(format_double(0.5), "0.5");
  std::setlocale(LC_NUMERIC, saved.c_str());
}

TEST(SpinBath, eigenstate_trace_has_unit_modulus) {
  const std::string text = R"({"experiment": "spin-bath", "environment": "eigenstate",
    "trace": {"couplings": [0.3, 1.7, 2.2], "t_max": 50, "samples": 501}})";
  const auto rows = parse_csv(find(run_experiment("spin-bath", text), "r_trace.csv").contents);
  ASSERT_EQ(rows.size(), 501U);
  for (const auto& r : rows) EXPECT_NEAR(num(r, "abs_r2"), 1.0, 1e-12);
}

TEST(SpinBath, eight_spin_scaling_row) {
  const std::string text = R"({"experiment": "spin-bath", "seed": 20260101, "scaling": {"n_list": [8]}})";
  const auto rows = parse_csv(find(run_experiment("spin-bath", text), "scaling.csv").contents);
  ASSERT_EQ(rows.size(), 1U);
  EXPECT_NEAR(num(rows[0], "log2_mean"), -8.0, 0.2);
}

TEST(Measure, balanced_collapse_and_repeated_outcomes) {
  std::ifstream in(std::string(DECOLAB_SOURCE_DIR) + "/configs/measure.json");
  std::stringstream ss;
  ss << in.rdbuf();
  const auto files = run_experiment("measure", ss.str());
  const auto collapse = parse_csv(find(files, "collapse.csv").contents);
  ASSERT_EQ(collapse.size(), 2U);
  for (const auto& r : collapse) {
    EXPECT_DOUBLE_EQ(num(r, "probability"), 0.5);
    EXPECT_LT(std::abs(num(r, "frequency") - 0.5), 3 * num(r, "sigma"));
  }
  for (const auto& r : parse_csv(find(files, "luders.csv").contents)) EXPECT_EQ(r.at("identical"), "1");
  const auto kraus = parse_csv(find(files, "kraus.csv").contents);
  ASSERT_EQ(kraus.size(), 1U);
  EXPECT_EQ(kraus[0].at("outcome"), "2");
  EXPECT_GT(num(kraus[0], "post_vacuum_fidelity"), 1.0 - 1e-12);
  const auto dump = nlohmann::json::parse(find(files, "post_states.json").contents);
  EXPECT_EQ(dump["provenance"]["experiment"], "measure");
  EXPECT_EQ(dump["kraus"].size(), 1U);
}

TEST(Measure, inline_kraus_set_is_accepted) {
  const std::string text = R"({"experiment": "measure", "kraus": {
    "set": {"labels": ["up", "down"], "operators": [[[1, 0], [0, 0]], [[0, 0], [0, 1]]]},
    "state": {"amplitudes": [0.6, 0.8]}}})";
  const auto rows = parse_csv(find(run_experiment("measure", text), "kraus.csv").contents);
  ASSERT_EQ(rows.size(), 2U);
  EXPECT_EQ(rows[0].at("label"), "up");
  EXPECT_NEAR(num(rows[0], "probability"), 0.36, 1e-15);
}

TEST(Pointer, sieve_puts_z_first_and_pointer_correlation_is_flat) {
  const std::string text = R"({"experiment": "pointer", "seed": 3,
    "correlation": {"n": 6, "thetas": [0.0, 0.7853981633974483], "t_max": 3, "samples": 31},
    "sieve": {"n": 6, "candidates": ["x", "z"]}})";
  const auto files = run_experiment("pointer", text);
  const auto sieve = parse_csv(find(files, "sieve.csv").contents);
  EXPECT_EQ(sieve[0].at("name"), "z");
  const auto corr = parse_csv(find(files, "correlation.csv").contents);
  for (const auto& r : corr) {
    EXPECT_NEAR(num(r, "correlation"), num(r, "closed_form"), 1e-10);
    if (num(r, "theta") == 0.0) {
      EXPECT_NEAR(num(r, "correlation"), 1.0, 1e-12);
    }
  }
}

TEST(OracleCompare, ten_spins_stay_within_tolerance) {
  const std::string text = R"({"experiment": "oracle-compare", "seed": 1, "n_list": [10], "trials": 100})";
  const auto summary = parse_csv(find(run_experiment("oracle-compare", text), "oracle_summary.csv").contents);
  EXPECT_LT(num(summary[0], "max_deviation"), 1e-10);
}

TEST(Determinism, outputs_do_not_depend_on_worker_count) {
  const std::string text = R"({"experiment": "oracle-compare", "seed": 9, "n_list": [3, 5, 7], "trials": 12})";
  const auto one = run_experiment("oracle-compare", text, {std::nullopt, 1});
  const auto four = run_experiment("oracle-compare", text, {std::nullopt, 4});
  ASSERT_EQ(one.size(), four.size());
  for (std::size_t i = 0; i < one.size(); ++i) EXPECT_EQ(one[i].contents, four[i].contents);
}

TEST(ParallelMap, keeps_index_order_and_rethrows_first_error) {
  const auto v = decolab::parallel_map(50, 4, [](std::size_t i) { return i * i; });
  for (std::size_t i = 0; i < 50; ++i) EXPECT_EQ(v[i], i * i);
  EXPECT_THROW(decolab::parallel_map(10, 3,
                                     [](std::size_t i) -> int {
                                       if (i >= 4) throw std::out_of_range(std::to_string(i));
                                       return 0;
                                     }),
               std::out_of_range);
}

TEST(Checks, invariant_suite_passes) {
  for (const auto& c : run_checks()) EXPECT_TRUE(c.passed) << c.name << " value=" << c.value;
}
