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

#include "nightbench/sweep.hpp"

#include <string>

#include "nightbench/error.hpp"

namespace nightbench {

SweepAxis parse_sweep_axis(std::string_view name) {
  if (name == "noise") return SweepAxis::kNoise;
  if (name == "gamma") return SweepAxis::kGamma;
  if (name == "saturation") return SweepAxis::kSaturation;
  throw UsageError("unknown sweep axis '" + std::string(name) + "' (expected noise, gamma or saturation)");
}

std::string_view to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kNoise: return "noise";
    case SweepAxis::kGamma: return "gamma";
    case SweepAxis::kSaturation: return "saturation";
  }
  return "?";
}

std::vector<double> standard_sweep_values(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kNoise: return {10, 25, 40, 55, 70};
    case SweepAxis::kGamma: return {0.2, 0.3, 0.4, 0.5, 0.6};
    case SweepAxis::kSaturation: return {0.2, 0.3, 0.4, 0.5, 0.6};
  }
  return {};
}

double axis_value(const DegradationParams& p, SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kNoise: return p.sigma;
    case SweepAxis::kGamma: return p.gamma;
    case SweepAxis::kSaturation: return p.alpha_s;
  }
  return 0.0;
}

void set_axis_value(DegradationParams& p, SweepAxis axis, double value) {
  switch (axis) {
    case SweepAxis::kNoise: p.sigma = value; break;
    case SweepAxis::kGamma: p.gamma = value; break;
    case SweepAxis::kSaturation: p.alpha_s = value; break;
  }
}

std::vector<DegradationParams> sweep_grid(const SweepSpec& spec) {
  if (spec.values.empty()) throw ParameterError("sweep needs at least one value");
  std::vector<DegradationParams> grid;
  grid.reserve(spec.values.size());
  for (double v : spec.values) {
    DegradationParams p = spec.defaults;
    set_axis_value(p, spec.axis, v);
    validate(p);
    grid.push_back(p);
  }
  return grid;
}

}  // namespace nightbench
