// Copyright 2026 The nightbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "nightbench/config.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "nightbench/dataset.hpp"
#include "nightbench/error.hpp"

namespace nightbench {

namespace {

constexpr std::array<std::string_view, 6> kModelKeys = {"alpha", "beta", "gamma", "alpha_s", "sigma", "mu"};
constexpr std::array<std::string_view, 9> kKnownKeys = {"alpha", "beta", "gamma",  "alpha_s", "sigma",
                                                        "mu",    "seed", "axis",   "values"};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_real(std::string_view text, std::string_view key) {
  text = trim(text);
  double value = 0.0;
  const char* begin = text.data();
  const char* end = text.data() + text.size();
  if (!text.empty() && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (text.empty() || ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw UsageError("config key '" + std::string(key) + "': invalid number '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

KeyValueConfig parse_kv_config(std::string_view text, std::string_view source) {
  KeyValueConfig cfg;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t nl = text.find('\n', start);
    std::string_view line = text.substr(start, nl == std::string_view::npos ? text.npos : nl - start);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (!line.empty()) {
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) {
        throw UsageError(std::string(source) + ": line " + std::to_string(line_no) + ": expected key = value");
      }
      const std::string key(trim(line.substr(0, eq)));
      const std::string value(trim(line.substr(eq + 1)));
      if (std::find(kKnownKeys.begin(), kKnownKeys.end(), key) == kKnownKeys.end()) {
        throw UsageError(std::string(source) + ": line " + std::to_string(line_no) + ": unknown key '" + key + "'");
      }
      if (!cfg.emplace(key, value).second) {
        throw UsageError(std::string(source) + ": line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
      }
    }
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  return cfg;
}

KeyValueConfig load_kv_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError(path.string() + ": cannot open config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_kv_config(ss.str(), path.string());
}

DegradationParams params_from_config(const KeyValueConfig& cfg, bool require_model_keys) {
  if (require_model_keys) {
    for (auto key : kModelKeys) {
      if (!cfg.contains(std::string(key))) {
        throw UsageError("missing config key '" + std::string(key) + "'");
      }
    }
  }
  DegradationParams p;
  const auto read = [&](std::string_view key, double& field) {
    if (auto it = cfg.find(std::string(key)); it != cfg.end()) field = parse_real(it->second, key);
  };
  read("alpha", p.alpha);
  read("beta", p.beta);
  read("gamma", p.gamma);
  read("alpha_s", p.alpha_s);
  read("sigma", p.sigma);
  read("mu", p.mu);
  if (auto it = cfg.find("seed"); it != cfg.end()) {
    const std::string_view text = trim(it->second);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), p.seed);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
      throw UsageError("config key 'seed': invalid unsigned integer '" + std::string(text) + "'");
    }
  }
  try {
    validate(p);
  } catch (const ParameterError& e) {
    throw UsageError(std::string("invalid degradation config: ") + e.what());
  }
  return p;
}

std::vector<double> parse_value_list(std::string_view text) {
  std::vector<double> values;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    values.push_back(parse_real(text.substr(start, comma == std::string_view::npos ? text.npos : comma - start),
                                "values"));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return values;
}

std::string format_degradation_config(const DegradationParams& p) {
  std::string out;
  out += "alpha = " + format_coordinate(p.alpha) + "\n";
  out += "beta = " + format_coordinate(p.beta) + "\n";
  out += "gamma = " + format_coordinate(p.gamma) + "\n";
  out += "alpha_s = " + format_coordinate(p.alpha_s) + "\n";
  out += "sigma = " + format_coordinate(p.sigma) + "\n";
  out += "mu = " + format_coordinate(p.mu) + "\n";
  out += "seed = " + std::to_string(p.seed) + "\n";
  return out;
}

}  // namespace nightbench
