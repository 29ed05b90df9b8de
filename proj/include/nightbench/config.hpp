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

#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "nightbench/degrade.hpp"
#include "nightbench/sweep.hpp"

namespace nightbench {

// Flat `key = value` text, one pair per line; `#` starts a comment. Keys:
//   alpha beta gamma alpha_s sigma mu seed      (degradation model)
//   axis values                                  (sweep spec; values comma-separated)
// Unknown keys, duplicates and malformed lines raise UsageError.
using KeyValueConfig = std::map<std::string, std::string>;

KeyValueConfig parse_kv_config(std::string_view text, std::string_view source = "<config>");
KeyValueConfig load_kv_config(const std::filesystem::path& path);

// Builds parameters from a config. When require_model_keys is set every model
// key except seed must be present; otherwise missing keys keep the defaults.
DegradationParams params_from_config(const KeyValueConfig& cfg, bool require_model_keys);

std::vector<double> parse_value_list(std::string_view text);

// Serializes every model key, seed included, in the same flat format.
std::string format_degradation_config(const DegradationParams& p);

}  // namespace nightbench
