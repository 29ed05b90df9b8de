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

// Shared fixtures for the unit tests and the acceptance runner.

#pragma once

#include <unistd.h>

#include <atomic>
#include <cstdio>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "nightbench/box.hpp"
#include "nightbench/dataset.hpp"
#include "nightbench/image.hpp"
#include "nightbench/image_io.hpp"
#include "nightbench/rng.hpp"

namespace nightbench::testing {

namespace fs = std::filesystem;

class TempDir {
 public:
  explicit TempDir(const std::string& tag = "t") {
    static std::atomic<int> counter{0};
    path_ = fs::temp_directory_path() /
            ("nightbench-test-" + std::to_string(::getpid()) + "-" + tag + "-" + std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

inline std::string read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_bytes(const fs::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  out << bytes;
}

inline std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// FNV-1a over the 8-bit quantized channels, row-major RGB.
inline std::uint64_t image_hash(const Image& img) {
  std::string bytes;
  bytes.reserve(img.data().size());
  for (double v : img.data()) bytes.push_back(static_cast<char>(quantize_channel(v)));
  return fnv1a(bytes);
}

inline Image random_image(int h, int w, std::uint64_t seed, double lo = 0.0, double hi = 1.0) {
  Rng rng(seed);
  std::vector<double> data(static_cast<std::size_t>(h) * w * 3);
  for (double& v : data) v = rng.uniform(lo, hi);
  return Image(h, w, std::move(data));
}

struct TranslatingScene {
  int frames = 60;
  int height = 160;
  int width = 240;
  int patch = 24;
  int start_x = 8;
  int start_y = 8;
  int dx = 3;
  int dy = 2;
  std::uint64_t seed = 11;
};

inline std::vector<BoundingBox> scene_groundtruth(const TranslatingScene& s) {
  std::vector<BoundingBox> gt;
  for (int t = 0; t < s.frames; ++t) {
    gt.push_back({double(s.start_x + s.dx * t), double(s.start_y + s.dy * t), double(s.patch), double(s.patch)});
  }
  return gt;
}

// Frames of a textured patch sliding over a dimmer textured background.
inline std::vector<Image> scene_frames(const TranslatingScene& s) {
  const Image background = random_image(s.height, s.width, derive_seed(s.seed, 0), 0.15, 0.45);
  const Image patch = random_image(s.patch, s.patch, derive_seed(s.seed, 1), 0.0, 1.0);
  std::vector<Image> frames;
  for (const auto& box : scene_groundtruth(s)) {
    Image img = background;
    for (int r = 0; r < s.patch; ++r) {
      for (int c = 0; c < s.patch; ++c) img.set_pixel(int(box.y) + r, int(box.x) + c, patch.pixel(r, c));
    }
    frames.push_back(std::move(img));
  }
  return frames;
}

inline std::string frame_name(std::size_t index, const char* ext = ".png") {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%08zu%s", index + 1, ext);
  return buf;
}

inline void write_sequence(const fs::path& dir, const std::vector<Image>& frames, const std::vector<BoundingBox>& gt,
                           const char* ext = ".png") {
  fs::create_directories(dir);
  for (std::size_t i = 0; i < frames.size(); ++i) write_image(frames[i], dir / frame_name(i, ext));
  write_groundtruth(gt, dir / kGroundTruthFile);
}

inline void write_scene(const fs::path& dir, const TranslatingScene& s) {
  write_sequence(dir, scene_frames(s), scene_groundtruth(s));
}

// A run whose predictions reproduce the given per-frame IoUs against a
// 10x10 ground truth by horizontal shifting (IoU = (10-s)/(10+s)).
inline TrackRun run_with_ious(const std::vector<double>& ious, std::string id = "seq") {
  TrackRun run{std::move(id), {}};
  for (double v : ious) {
    const BoundingBox gt{0, 0, 10, 10};
    const double shift = 10.0 * (1.0 - v) / (1.0 + v);
    run.frames.push_back({gt, BoundingBox{shift, 0, 10, 10}});
  }
  return run;
}

}  // namespace nightbench::testing
