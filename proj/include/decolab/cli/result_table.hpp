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
 * Tabular results and their CSV / JSON encodings.
 *
 * CSV files start with the provenance block as '#' comment lines, followed by
 * a header row and one line per row. Numbers are written with 17 significant
 * digits and '.' as decimal separator, independent of the C locale.
 */

#pragma once

#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "decolab/errors.hpp"

namespace decolab::cli {

inline constexpr const char* kVersion = "decolab 1.0.0";

struct Provenance {
  std::string experiment;
  std::string config_hash;
  std::optional<std::uint64_t> seed;
  std::string version = kVersion;

  std::vector<std::pair<std::string, std::string>> entries() const {
    return {{"experiment", experiment},
            {"config_hash", config_hash},
            {"seed", seed ? std::to_string(*seed) : std::string("none")},
            {"version", version}};
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    for (const auto& [k, v] : entries()) j[k] = v;
    return j;
  }
};

using Cell = std::variant<std::int64_t, double, std::string>;

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  // snprintf honours LC_NUMERIC; force '.' regardless.
  for (char* c = buf; *c; ++c) {
    if (*c == ',') *c = '.';
  }
  return buf;
}

inline std::string format_cell(const Cell& c) {
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
  const auto& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + '"';
}

class ResultTable {
 public:
  ResultTable(std::string name, std::vector<std::string> columns)
      : name_(std::move(name)), columns_(std::move(columns)) {}

  void add_row(std::vector<Cell> row) {
    if (row.size() != columns_.size()) {
      throw ArgumentError("ResultTable " + name_ + ": row has " + std::to_string(row.size()) +
                          " cells, expected " + std::to_string(columns_.size()));
    }
    rows_.push_back(std::move(row));
  }

  const std::string& name() const noexcept { return name_; }
  const std::vector<std::string>& columns() const noexcept { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const noexcept { return rows_; }

  std::string to_csv(const Provenance& prov) const {
    std::ostringstream out;
    for (const auto& [k, v] : prov.entries()) out << "# " << k << ": " << v << '\n';
    for (std::size_t c = 0; c < columns_.size(); ++c) out << (c ? "," : "") << columns_[c];
    out << '\n';
    for (const auto& row : rows_) {
      for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_cell(row[c]);
      out << '\n';
    }
    return out.str();
  }

 private:
  std::string name_;
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

/// One output file: a relative name and its full contents.
struct OutputFile {
  std::string name;
  std::string contents;
};

}  // namespace decolab::cli
