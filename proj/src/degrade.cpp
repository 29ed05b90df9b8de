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

#include "nightbench/degrade.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>

#include "nightbench/config.hpp"
#include "nightbench/error.hpp"
#include "nightbench/image_io.hpp"

namespace nightbench {

namespace fs = std::filesystem;

DegradationParams DegradationParams::identity(std::uint64_t seed) {
  DegradationParams p;
  p.alpha = 1.0;
  p.beta = 0.0;
  p.gamma = 1.0;
  p.alpha_s = 1.0;
  p.sigma = 0.0;
  p.mu = 0.0;
  p.seed = seed;
  return p;
}

void validate(const DegradationParams& p) {
  for (double v : {p.alpha, p.beta, p.gamma, p.alpha_s, p.sigma, p.mu}) {
    if (!std::isfinite(v)) throw ParameterError("degradation parameters must be finite");
  }
  if (!(p.gamma > 0.0)) throw ParameterError("gamma must be > 0");
  if (p.alpha < 0.0) throw ParameterError("alpha must be >= 0");
  if (p.alpha_s < 0.0) throw ParameterError("alpha_s must be >= 0");
  if (p.sigma < 0.0) throw ParameterError("sigma must be >= 0");
}

Image apply_gamma_contrast(const Image& img, double alpha, double beta, double gamma) {
  if (!(gamma > 0.0)) throw ParameterError("gamma must be > 0");
  Image out = img;
  for (double& v : out.data()) {
    v = clamp_unit(alpha * std::pow(v, gamma) + beta);
  }
  return out;
}

Image apply_color_imbalance(const Image& img, double alpha_s) {
  if (!(alpha_s >= 0.0)) throw ParameterError("alpha_s must be >= 0");
  Image out(img.height(), img.width());
  for (int r = 0; r < img.height(); ++r) {
    for (int c = 0; c < img.width(); ++c) {
      Hsv hsv = rgb_to_hsv(img.pixel(r, c));
      hsv.s = clamp_unit(hsv.s * alpha_s);
      out.set_pixel(r, c, hsv_to_rgb(hsv));
    }
  }
  return out;
}

Image add_gaussian_noise(const Image& img, double sigma_8bit, double mu_8bit, Rng& rng) {
  if (!(sigma_8bit >= 0.0)) throw ParameterError("sigma must be >= 0");
  Image out = img;
  for (double& v : out.data()) {
    const double n = mu_8bit + sigma_8bit * rng.normal();
    v = clamp_unit(v + n / 255.0);
  }
  return out;
}

Image degrade_frame(const Image& img, const DegradationParams& p, std::uint64_t frame_index) {
  validate(p);
  Rng rng(derive_seed(p.seed, frame_index));
  Image out = apply_gamma_contrast(img, p.alpha, p.beta, p.gamma);
  out = apply_color_imbalance(out, p.alpha_s);
  out = add_gaussian_noise(out, p.sigma, p.mu, rng);
  for (double& v : out.data()) v = clamp_unit(v);
  return out;
}

SequenceManifest degrade_sequence(const SequenceManifest& manifest, const DegradationParams& p,
                                  const fs::path& out_dir, const DegradeOptions& options) {
  validate(p);
  const std::size_t n = manifest.frames.size();

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (options.work_order) {
    order = *options.work_order;
    std::vector<bool> seen(n, false);
    const bool valid = order.size() == n && std::all_of(order.begin(), order.end(), [&](std::size_t i) {
      if (i >= n || seen[i]) return false;
      seen[i] = true;
      return true;
    });
    if (!valid) throw ParameterError("work order must be a permutation of frame indices");
  }

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError(out_dir.string() + ": cannot create directory: " + ec.message());

  SequenceManifest out = manifest;
  out.dir = out_dir;
  for (std::size_t i = 0; i < n; ++i) {
    out.frames[i] = out_dir / manifest.frames[i].filename();
  }

  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::size_t failed_index = std::numeric_limits<std::size_t>::max();
  std::string failed_message;

  auto worker = [&] {
    while (true) {
      const std::size_t slot = next.fetch_add(1);
      if (slot >= n) return;
      const std::size_t i = order[slot];
      try {
        const Image frame = read_image(manifest.frames[i]);
        write_image(degrade_frame(frame, p, i), out.frames[i]);
      } catch (const std::exception& e) {
        std::lock_guard lock(error_mutex);
        if (i < failed_index) {
          failed_index = i;
          failed_message = e.what();
        }
      }
    }
  };

  unsigned threads = options.threads != 0 ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }

  if (failed_index != std::numeric_limits<std::size_t>::max()) {
    throw IoError("sequence '" + manifest.id + "' frame " + std::to_string(failed_index) + ": " + failed_message);
  }

  write_groundtruth(manifest.groundtruth, out_dir / kGroundTruthFile);
  std::ofstream record(out_dir / kDegradationRecordFile, std::ios::binary);
  record << format_degradation_config(p);
  if (!record) throw IoError((out_dir / kDegradationRecordFile).string() + ": write failed");
  return out;
}

}  // namespace nightbench
