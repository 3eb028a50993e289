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
 * JSON encoding of complex matrices and Kraus sets.
 *
 * A complex number is a two-element array [re, im]. A matrix is an array of
 * rows, each row an array of complex numbers (row-major). A Kraus set is
 *
 *   {"labels": ["0", "1", ...], "operators": [matrix, matrix, ...]}
 *
 * with "labels" optional on input.
 */

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "decolab/errors.hpp"
#include "decolab/measurement.hpp"
#include "decolab/state_algebra.hpp"

namespace decolab {

inline nlohmann::json complex_to_json(cplx z) { return nlohmann::json::array({z.real(), z.imag()}); }

inline cplx complex_from_json(const nlohmann::json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ArgumentError("expected a complex number as [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

inline nlohmann::json matrix_to_json(const CMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline CMatrix matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) {
    throw ArgumentError("expected a matrix as an array of rows");
  }
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  CMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw ArgumentError("matrix row " + std::to_string(i) + " has the wrong length");
    }
    for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = complex_from_json(row[static_cast<std::size_t>(c)]);
  }
  return m;
}

inline nlohmann::json vector_to_json(const CVector& v) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

inline CVector vector_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) throw ArgumentError("expected a non-empty amplitude array");
  CVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i]);
  return v;
}

inline nlohmann::json kraus_to_json(const KrausSet& k) {
  nlohmann::json ops = nlohmann::json::array();
  for (const auto& m : k.operators()) ops.push_back(matrix_to_json(m));
  return {{"labels", k.labels()}, {"operators", std::move(ops)}};
}

inline KrausSet kraus_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("operators") || !j["operators"].is_array()) {
    throw ArgumentError("Kraus set JSON needs an \"operators\" array");
  }
  std::vector<CMatrix> ops;
  for (const auto& m : j["operators"]) ops.push_back(matrix_from_json(m));
  std::vector<std::string> labels;
  if (j.contains("labels")) labels = j["labels"].get<std::vector<std::string>>();
  return KrausSet(std::move(ops), std::move(labels));
}

}  // namespace decolab
