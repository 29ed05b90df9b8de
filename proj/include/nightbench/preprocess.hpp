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
#include <string>

#include "nightbench/image.hpp"

namespace nightbench {

// Preprocessing slot between degradation and tracking. `external` hands each
// frame to a user command (a denoiser or enhancer); the others are simple
// built-in filters.
struct PreprocessSpec {
  enum class Kind { kNone, kExternal, kMedian, kGaussianBlur, kGammaBoost };

  Kind kind = Kind::kNone;
  // Must contain both {in} and {out} placeholders for kExternal.
  std::string command;
  int radius = 1;
  double sigma = 1.0;
  double gamma = 0.5;
};

void validate(const PreprocessSpec& spec);

// Textual form used on the command line:
//   none | median[:radius] | gaussian_blur[:sigma] | gamma_boost[:gamma] | external:<command>
PreprocessSpec parse_preprocess_spec(std::string_view text);
std::string to_string(const PreprocessSpec& spec);

// Temp directory for external hooks: $NIGHTBENCH_TMPDIR if set, else the
// system temp directory.
std::filesystem::path preprocess_temp_dir();

Image preprocess_frame(const Image& img, const PreprocessSpec& spec);

Image median_filter(const Image& img, int radius);
Image gaussian_blur(const Image& img, double sigma);
// v -> v^(1/gamma); inverts the synthesis gamma.
Image gamma_boost(const Image& img, double gamma);

}  // namespace nightbench
