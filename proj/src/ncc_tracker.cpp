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

#include "nightbench/ncc_tracker.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "nightbench/error.hpp"
#include "nightbench/image_io.hpp"

namespace nightbench {

namespace {

constexpr double kTieTolerance = 1e-12;

int round_to_int(double v) { return static_cast<int>(std::lround(v)); }

std::vector<double> gray_patch(std::span<const double> gray, int frame_w, int left, int top, int w, int h) {
  std::vector<double> out(static_cast<std::size_t>(w) * h);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      out[static_cast<std::size_t>(r) * w + c] = gray[static_cast<std::size_t>(top + r) * frame_w + left + c];
    }
  }
  return out;
}

}  // namespace

double ncc_confidence(double peak, const NccOptions& options) {
  return sigmoid(options.confidence_gain * (peak - options.confidence_center));
}

std::optional<double> normalized_cross_correlation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty()) throw ShapeError("NCC patches must be nonempty and equally sized");
  const double n = static_cast<double>(a.size());
  double mean_a = 0.0, mean_b = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    mean_a += a[i];
    mean_b += b[i];
  }
  mean_a /= n;
  mean_b /= n;
  double cross = 0.0, var_a = 0.0, var_b = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - mean_a;
    const double db = b[i] - mean_b;
    cross += da * db;
    var_a += da * da;
    var_b += db * db;
  }
  if (!(var_a > 1e-18) || !(var_b > 1e-18)) return std::nullopt;
  return cross / std::sqrt(var_a * var_b);
}

NccTracker::NccTracker(const Image& first_frame, const BoundingBox& init, NccOptions options)
    : options_(options),
      init_(init),
      patch_w_(round_to_int(init.w)),
      patch_h_(round_to_int(init.h)),
      left_(round_to_int(init.x)),
      top_(round_to_int(init.y)),
      templates_([&] {
        validate_box(init);
        if (options.search_radius < 0) throw ParameterError("search radius must be >= 0");
        const int w = round_to_int(init.w), h = round_to_int(init.h);
        const int x = round_to_int(init.x), y = round_to_int(init.y);
        if (w < 1 || h < 1 || x < 0 || y < 0 || x + w > first_frame.width() || y + h > first_frame.height()) {
          throw ParameterError("initial box must lie within the first frame");
        }
        const auto patch = gray_patch(to_gray(first_frame), first_frame.width(), x, y, w, h);
        return TemplateState(TokenSeq(Eigen::Map<const Eigen::MatrixXd>(patch.data(), w * h, 1), h, w));
      }()) {}

TokenSeq NccTracker::extract_patch(const Image& frame, int left, int top) const {
  const auto patch = gray_patch(to_gray(frame), frame.width(), left, top, patch_w_, patch_h_);
  return TokenSeq(Eigen::Map<const Eigen::MatrixXd>(patch.data(), patch_w_ * patch_h_, 1), patch_h_, patch_w_);
}

std::optional<BoundingBox> NccTracker::update(const Image& frame) {
  if (frame.width() < patch_w_ || frame.height() < patch_h_) {
    throw TrackingError("frame is smaller than the tracked template");
  }
  const Eigen::MatrixXd& tmpl = templates_.online().tokens;
  const std::span<const double> tmpl_span(tmpl.data(), static_cast<std::size_t>(tmpl.size()));
  const std::vector<double> gray = to_gray(frame);

  double best = -std::numeric_limits<double>::infinity();
  int best_dist2 = std::numeric_limits<int>::max();
  int best_left = left_, best_top = top_;
  bool found = false;
  const int r = options_.search_radius;
  for (int dy = -r; dy <= r; ++dy) {
    const int top = top_ + dy;
    if (top < 0 || top + patch_h_ > frame.height()) continue;
    for (int dx = -r; dx <= r; ++dx) {
      const int left = left_ + dx;
      if (left < 0 || left + patch_w_ > frame.width()) continue;
      const auto patch = gray_patch(gray, frame.width(), left, top, patch_w_, patch_h_);
      const auto score = normalized_cross_correlation(tmpl_span, patch);
      if (!score) continue;
      const int dist2 = dx * dx + dy * dy;
      if (*score > best + kTieTolerance || (std::fabs(*score - best) <= kTieTolerance && dist2 < best_dist2)) {
        best = *score;
        best_dist2 = dist2;
        best_left = left;
        best_top = top;
        found = true;
      }
    }
  }
  if (!found) return std::nullopt;

  left_ = best_left;
  top_ = best_top;
  last_peak_ = best;
  last_confidence_ = ncc_confidence(best, options_);
  if (options_.refresh_template) {
    templates_ = update_template(templates_, extract_patch(frame, left_, top_), last_confidence_);
  }
  const double shift_x = left_ - round_to_int(init_.x);
  const double shift_y = top_ - round_to_int(init_.y);
  return BoundingBox{init_.x + shift_x, init_.y + shift_y, init_.w, init_.h};
}

TrackRun ncc_track(std::span<const Image> frames, std::span<const BoundingBox> groundtruth, const BoundingBox& init,
                   const NccOptions& options, std::string sequence_id) {
  if (frames.empty()) throw TrackingError("cannot track an empty sequence");
  if (frames.size() != groundtruth.size()) throw TrackingError("frame and ground-truth counts differ");
  TrackRun run{std::move(sequence_id), {}};
  run.frames.reserve(frames.size());
  NccTracker tracker(frames[0], init, options);
  run.frames.push_back({groundtruth[0], init});
  for (std::size_t i = 1; i < frames.size(); ++i) {
    run.frames.push_back({groundtruth[i], tracker.update(frames[i])});
  }
  return run;
}

TrackRun ncc_track(const SequenceManifest& manifest, const BoundingBox& init, const NccOptions& options,
                   const PreprocessSpec& preprocess) {
  if (manifest.frames.empty()) throw TrackingError("sequence '" + manifest.id + "' has no frames");
  const auto load = [&](std::size_t i) {
    try {
      return preprocess_frame(read_image(manifest.frames[i]), preprocess);
    } catch (const Error& e) {
      throw TrackingError("sequence '" + manifest.id + "' frame " + std::to_string(i) + ": " + e.what());
    }
  };

  TrackRun run{manifest.id, {}};
  run.frames.reserve(manifest.frames.size());
  const Image first = load(0);
  NccTracker tracker(first, init, options);
  run.frames.push_back({manifest.groundtruth[0], init});
  for (std::size_t i = 1; i < manifest.frames.size(); ++i) {
    run.frames.push_back({manifest.groundtruth[i], tracker.update(load(i))});
  }
  return run;
}

}  // namespace nightbench
