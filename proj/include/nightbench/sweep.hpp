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

#include <string>
#include <string_view>
#include <vector>

#include "nightbench/degrade.hpp"

namespace nightbench {

// noise -> sigma, gamma -> gamma, saturation -> alpha_s.
enum class SweepAxis { kNoise, kGamma, kSaturation };

SweepAxis parse_sweep_axis(std::string_view name);
std::string_view to_string(SweepAxis axis);

// One-factor-at-a-time sweep: `axis` takes each of `values`, everything else
// stays at `defaults`.
struct SweepSpec {
  SweepAxis axis = SweepAxis::kNoise;
  std::vector<double> values;
  DegradationParams defaults;
};

// Grids used for the published low-light sweeps.
std::vector<double> standard_sweep_values(SweepAxis axis);

double axis_value(const DegradationParams& p, SweepAxis axis);
void set_axis_value(DegradationParams& p, SweepAxis axis, double value);

// One params record per value, in the given order.
std::vector<DegradationParams> sweep_grid(const SweepSpec& spec);

}  // namespace nightbench
