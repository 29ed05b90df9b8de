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
#include <filesystem>
#include <optional>
#include <vector>

#include "nightbench/dataset.hpp"
#include "nightbench/image.hpp"
#include "nightbench/rng.hpp"

namespace nightbench {

/// Parameters of the synthetic low-light model
///
///   g = C_{alpha_s}(clamp(alpha * f^gamma + beta)) + n,   n ~ N(mu, sigma^2) / 255
///
/// where C scales HSV saturation. Intensities are normalized to [0, 1];
/// sigma and mu stay in 8-bit units and are divided by 255 when applied.
/// Member defaults are the low-light defaults used by the sweeps.
struct DegradationParams {
  double alpha = 0.4;
  double beta = 0.0;
  double gamma = 0.5;
  double alpha_s = 0.4;
  double sigma = 10.0;
  double mu = 0.0;
  std::uint64_t seed = 0;

  // alpha = 1, beta = 0, gamma = 1, alpha_s = 1, sigma = mu = 0.
  static DegradationParams identity(std::uint64_t seed = 0);

  bool operator==(const DegradationParams&) const = default;
};

// Throws ParameterError unless gamma > 0, alpha >= 0, alpha_s >= 0,
// sigma >= 0 and every field is finite.
void validate(const DegradationParams& p);

// v -> clamp(alpha * v^gamma + beta, 0, 1) on every channel.
Image apply_gamma_contrast(const Image& img, double alpha, double beta, double gamma);

// Scales HSV saturation by alpha_s (clamped to [0,1]); hue and value untouched.
Image apply_color_imbalance(const Image& img, double alpha_s);

// v -> clamp(v + n / 255, 0, 1) with n ~ N(mu_8bit, sigma_8bit^2), drawn in
// row-major, channel-interleaved order.
Image add_gaussian_noise(const Image& img, double sigma_8bit, double mu_8bit, Rng& rng);

// Full model. The noise stream is derive_seed(p.seed, frame_index), so the
// result depends only on (img, p, frame_index).
Image degrade_frame(const Image& img, const DegradationParams& p, std::uint64_t frame_index = 0);

struct DegradeOptions {
  // 0 picks the hardware concurrency.
  unsigned threads = 0;
  // Order in which frames are dispatched to workers; defaults to 0..n-1.
  // Never affects the output.
  std::optional<std::vector<std::size_t>> work_order;
};

// Degrades every frame of a sequence into out_dir (same file names), copies
// the ground truth unchanged and records the parameters in degradation.txt.
// Failures abort with the lowest failing frame index in the message.
SequenceManifest degrade_sequence(const SequenceManifest& manifest, const DegradationParams& p,
                                  const std::filesystem::path& out_dir, const DegradeOptions& options = {});

inline constexpr const char* kDegradationRecordFile = "degradation.txt";

}  // namespace nightbench
