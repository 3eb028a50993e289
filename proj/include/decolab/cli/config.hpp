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

#include <algorithm>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace decolab::cli {

/// Bad or missing configuration; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 1-based line of the first occurrence of "key" in the source text, or 0.
inline std::size_t line_of_key(const std::string& text, const std::string& key) {
  const auto pos = text.find('"' + key + '"');
  if (pos == std::string::npos) return 0;
  return static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<long>(pos), '\n')) + 1;
}

/// Parses config text. Syntax errors are reported with line and column.
inline nlohmann::json parse_config_text(const std::string& text) {
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
    throw ConfigError("config is empty");
  }
  try {
    auto j = nlohmann::json::parse(text);
    if (!j.is_object()) throw ConfigError("config line 1: top level must be a JSON object");
    if (j.empty()) throw ConfigError("config line 1: config object is empty");
    return j;
  } catch (const nlohmann::json::parse_error& e) {
    const auto byte = std::min<std::size_t>(e.byte, text.size());
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < byte; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError("config line " + std::to_string(line) + ", column " + std::to_string(col) +
                      ": invalid JSON");
  }
}

/// Typed, path-aware view of one JSON object in the config. Unknown keys are
/// rejected by finish().
class Section {
 public:
  Section(const nlohmann::json& j, std::string path, const std::string& text)
      : j_(&j), path_(std::move(path)), text_(&text) {
    if (!j.is_object()) fail("", "expected an object");
  }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    const std::string where = key.empty() ? (path_.empty() ? "/" : path_) : path_ + "/" + key;
    const std::size_t line = key.empty() ? 0 : line_of_key(*text_, key);
    throw ConfigError("config error at " + where +
                      (line ? " (line " + std::to_string(line) + ")" : std::string()) + ": " + what);
  }

  bool has(const std::string& key) const {
    used_.insert(key);
    return j_->contains(key);
  }

  const nlohmann::json& raw(const std::string& key) const {
    if (!has(key)) fail(key, "required key is missing");
    return (*j_)[key];
  }

  Section child(const std::string& key) const { return Section(raw(key), path_ + "/" + key, *text_); }

  double number(const std::string& key) const {
    const auto& v = raw(key);
    if (!v.is_number()) fail(key, "expected a number");
    return v.get<double>();
  }
  double number_or(const std::string& key, double def) const { return has(key) ? number(key) : def; }

  std::int64_t integer(const std::string& key) const {
    const auto& v = raw(key);
    if (!v.is_number_integer()) fail(key, "expected an integer");
    return v.get<std::int64_t>();
  }
  std::int64_t integer_or(const std::string& key, std::int64_t def) const {
    return has(key) ? integer(key) : def;
  }

  std::size_t count(const std::string& key, std::size_t lo = 0) const {
    const auto v = integer(key);
    if (v < static_cast<std::int64_t>(lo)) fail(key, "must be at least " + std::to_string(lo));
    return static_cast<std::size_t>(v);
  }
  std::size_t count_or(const std::string& key, std::size_t def, std::size_t lo = 0) const {
    return has(key) ? count(key, lo) : def;
  }

  std::string string(const std::string& key) const {
    const auto& v = raw(key);
    if (!v.is_string()) fail(key, "expected a string");
    return v.get<std::string>();
  }
  std::string string_or(const std::string& key, const std::string& def) const {
    return has(key) ? string(key) : def;
  }

  std::complex<double> complex(const std::string& key) const {
    const auto& v = raw(key);
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
      fail(key, "expected a complex number as [re, im]");
    }
    return {v[0].get<double>(), v[1].get<double>()};
  }
  std::complex<double> complex_or(const std::string& key, std::complex<double> def) const {
    return has(key) ? complex(key) : def;
  }

  std::vector<double> numbers(const std::string& key) const {
    const auto& v = raw(key);
    if (!v.is_array() || v.empty()) fail(key, "expected a non-empty array of numbers");
    std::vector<double> out;
    for (const auto& x : v) {
      if (!x.is_number()) fail(key, "expected a non-empty array of numbers");
      out.push_back(x.get<double>());
    }
    return out;
  }

  std::vector<std::size_t> counts(const std::string& key, std::size_t lo = 0) const {
    const auto& v = raw(key);
    if (!v.is_array() || v.empty()) fail(key, "expected a non-empty array of integers");
    std::vector<std::size_t> out;
    for (const auto& x : v) {
      if (!x.is_number_integer() || x.get<std::int64_t>() < static_cast<std::int64_t>(lo)) {
        fail(key, "expected integers >= " + std::to_string(lo));
      }
      out.push_back(x.get<std::size_t>());
    }
    return out;
  }

  std::vector<std::complex<double>> complexes(const std::string& key) const {
    const auto& v = raw(key);
    if (!v.is_array() || v.empty()) fail(key, "expected a non-empty array of [re, im] pairs");
    std::vector<std::complex<double>> out;
    for (const auto& x : v) {
      if (x.is_number()) {
        out.emplace_back(x.get<double>(), 0.0);
      } else if (x.is_array() && x.size() == 2 && x[0].is_number() && x[1].is_number()) {
        out.emplace_back(x[0].get<double>(), x[1].get<double>());
      } else {
        fail(key, "expected a non-empty array of [re, im] pairs");
      }
    }
    return out;
  }

  /// Rejects keys that were never looked up.
  void finish() const {
    for (const auto& item : j_->items()) {
      if (!used_.count(item.key())) fail(item.key(), "unknown key");
    }
  }

  const std::string& path() const noexcept { return path_; }
  const nlohmann::json& json() const noexcept { return *j_; }
  const std::string& text() const noexcept { return *text_; }

 private:
  const nlohmann::json* j_;
  std::string path_;
  const std::string* text_;
  mutable std::set<std::string> used_;
};

/// FNV-1a of the canonical (key-sorted, compact) JSON dump.
inline std::string config_hash(const nlohmann::json& j) {
  const std::string s = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline std::uint64_t parse_seed(const std::string& s, const std::string& origin) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
    throw ConfigError(origin + ": seed must be an unsigned integer, got '" + s + "'");
  }
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    throw ConfigError(origin + ": seed out of range");
  }
}

/// --seed beats DECOLAB_SEED, which beats the config's "seed" key.
inline std::optional<std::uint64_t> resolve_seed(const Section& root,
                                                 std::optional<std::uint64_t> flag) {
  std::optional<std::uint64_t> from_config;
  if (root.has("seed")) {
    const auto& v = root.raw("seed");
    if (!v.is_number_unsigned()) root.fail("seed", "expected an unsigned integer");
    from_config = v.get<std::uint64_t>();
  }
  if (flag) return flag;
  if (const char* env = std::getenv("DECOLAB_SEED"); env && *env) return parse_seed(env, "DECOLAB_SEED");
  return from_config;
}

}  // namespace decolab::cli
