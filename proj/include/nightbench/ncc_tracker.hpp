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

#include <optional>
#include <span>
#include <string>

#include "nightbench/box.hpp"
#include "nightbench/dataset.hpp"
#include "nightbench/image.hpp"
#include "nightbench/metrics.hpp"
#include "nightbench/preprocess.hpp"
#include "nightbench/spm.hpp"

namespace nightbench {

struct NccOptions {
  int search_radius = 16;
  // Refresh the online template through the confidence gate.
  bool refresh_template = true;
  // confidence = logistic(gain * (peak - center))
  double confidence_gain = 10.0;
  double confidence_center = 0.5;
};

double ncc_confidence(double peak, const NccOptions& options);

// Normalized cross-correlation of two equally sized zero-mean-able patches.
// Returns nullopt if either patch has zero variance.
std::optional<double> normalized_cross_correlation(std::span<const double> a, std::span<const double> b);

/// Exhaustive NCC template matcher on grayscale intensities. The box size is
/// fixed at the initial box; each frame searches every integer offset within
/// +-search_radius of the previous position (clipped to the frame). Peaks
/// tied within 1e-12 go to the smaller displacement.
class NccTracker {
 public:
  NccTracker(const Image& first_frame, const BoundingBox& init, NccOptions options = {});

  // Predicted box, or nullopt when the template is degenerate.
  std::optional<BoundingBox> update(const Image& frame);

  const TemplateState& templates() const { return templates_; }
  double last_peak() const { return last_peak_; }
  double last_confidence() const { return last_confidence_; }

 private:
  TokenSeq extract_patch(const Image& frame, int left, int top) const;

  NccOptions options_;
  BoundingBox init_;
  int patch_w_;
  int patch_h_;
  int left_;
  int top_;
  TemplateState templates_;
  double last_peak_ = 1.0;
  double last_confidence_ = 1.0;
};

// Frame 0 is reported as `init` (one-pass protocol); ground truth is only
// paired into the run, never read by the tracker.
TrackRun ncc_track(std::span<const Image> frames, std::span<const BoundingBox> groundtruth, const BoundingBox& init,
                   const NccOptions& options = {}, std::string sequence_id = "sequence");

// Streams frames from disk, applying `preprocess` to each. Load failures are
// reported as TrackingError naming the frame index.
TrackRun ncc_track(const SequenceManifest& manifest, const BoundingBox& init, const NccOptions& options = {},
                   const PreprocessSpec& preprocess = {});

}  // namespace nightbench
