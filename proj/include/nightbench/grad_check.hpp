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

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "nightbench/attention.hpp"
#include "nightbench/box.hpp"
#include "nightbench/losses.hpp"
#include "nightbench/spm.hpp"

namespace nightbench {

struct GradCheckOptions {
  double epsilon = 1e-5;
  double tolerance = 1e-4;
  // Relative error is |a - n| / max(|a|, |n|, denominator_floor), so
  // near-zero gradients are compared absolutely at this scale.
  double denominator_floor = 1e-6;
};

struct GradCheckReport {
  std::size_t checked = 0;
  std::vector<std::size_t> skipped;
  double max_relative_error = 0.0;
  std::size_t worst_index = 0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
  double tolerance = 0.0;

  bool passed() const { return max_relative_error <= tolerance; }
  std::string summary() const;
};

using ScalarFunction = std::function<double(std::span<const double>)>;

/// Compares `analytic` with central differences (f(x + e) - f(x - e)) / 2e
/// coordinate by coordinate. Coordinates for which `skip` returns true are
/// listed in report.skipped instead of being checked.
GradCheckReport grad_check(const ScalarFunction& f, std::span<const double> point, std::span<const double> analytic,
                           const GradCheckOptions& options = {},
                           const std::function<bool(std::size_t)>& skip = {});

// Checks every parameter and both input sequences of mixed_attention through
// the scalar sum(G .* outputs) with a fixed random G drawn from `seed`.
GradCheckReport check_mixed_attention_gradients(const TokenSeq& target, const TokenSeq& search, const MamParams& p,
                                                std::uint64_t seed, const GradCheckOptions& options = {});

GradCheckReport check_spm_gradients(const SpmParams& p, const TokenSeq& search_roi, const TokenSeq& initial_target,
                                    const GradCheckOptions& options = {});

// Kink coordinates (L1 ties, GIoU edge coincidences within epsilon) are skipped.
GradCheckReport check_l1_giou_gradients(const BoundingBox& pred, const BoundingBox& gt, const LossWeights& w = {},
                                        const GradCheckOptions& options = {});
GradCheckReport check_giou_gradients(const BoundingBox& pred, const BoundingBox& gt,
                                     const GradCheckOptions& options = {});

GradCheckReport check_score_loss_gradient(double p, int y, const GradCheckOptions& options = {});

}  // namespace nightbench
