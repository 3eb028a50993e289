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

#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "decolab/errors.hpp"

namespace decolab {

/// Sampled trajectory (t_j, value_j) plus free-form metadata for export.
template <class T>
struct TimeSeries {
  std::vector<double> times;
  std::vector<T> values;
  std::map<std::string, std::string> metadata;

  std::size_t size() const noexcept { return times.size(); }
};

/// n evenly spaced samples on [t0, t1], endpoints included.
inline std::vector<double> linspace(double t0, double t1, std::size_t n) {
  if (n < 2) throw ArgumentError("linspace: need at least two samples");
  std::vector<double> out(n);
  const double step = (t1 - t0) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) out[i] = t0 + step * static_cast<double>(i);
  out.back() = t1;
  return out;
}

/// Samples 0, step, 2 step, ... up to and including the last point <= t_max.
inline std::vector<double> uniform_grid(double step, double t_max) {
  if (!(step > 0.0) || !(t_max >= 0.0)) throw ArgumentError("uniform_grid: bad step or span");
  const auto n = static_cast<std::size_t>(t_max / step) + 1;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = step * static_cast<double>(i);
  return out;
}

}  // namespace decolab
