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

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace nightbench {

struct Rgb {
  double r = 0.0;
  double g = 0.0;
  double b = 0.0;
};

// Hue in degrees [0, 360), saturation and value in [0, 1].
struct Hsv {
  double h = 0.0;
  double s = 0.0;
  double v = 0.0;
};

// Row-major H x W x 3 raster with channels normalized to [0, 1].
//
// The constructors reject out-of-range data; the mutable accessors do not
// re-check, so code writing through them is expected to clamp.
class Image {
 public:
  Image() = default;
  Image(int height, int width, double fill = 0.0);
  Image(int height, int width, std::vector<double> data);

  int height() const { return height_; }
  int width() const { return width_; }
  std::size_t pixel_count() const { return static_cast<std::size_t>(height_) * width_; }
  bool empty() const { return data_.empty(); }

  double at(int row, int col, int channel) const {
    return data_[index(row, col, channel)];
  }
  double& at(int row, int col, int channel) { return data_[index(row, col, channel)]; }

  Rgb pixel(int row, int col) const {
    const std::size_t i = index(row, col, 0);
    return {data_[i], data_[i + 1], data_[i + 2]};
  }
  void set_pixel(int row, int col, const Rgb& rgb);

  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  bool operator==(const Image&) const = default;

 private:
  std::size_t index(int row, int col, int channel) const {
    return (static_cast<std::size_t>(row) * width_ + col) * 3 + channel;
  }

  int height_ = 0;
  int width_ = 0;
  std::vector<double> data_;
};

class HsvImage {
 public:
  HsvImage() = default;
  HsvImage(int height, int width);

  int height() const { return height_; }
  int width() const { return width_; }

  const Hsv& at(int row, int col) const { return data_[static_cast<std::size_t>(row) * width_ + col]; }
  Hsv& at(int row, int col) { return data_[static_cast<std::size_t>(row) * width_ + col]; }

  std::span<const Hsv> data() const { return data_; }
  std::span<Hsv> data() { return data_; }

 private:
  int height_ = 0;
  int width_ = 0;
  std::vector<Hsv> data_;
};

double clamp_unit(double v);

// Standard hexcone conversion. Achromatic pixels get H = 0; black gets S = 0.
Hsv rgb_to_hsv(const Rgb& rgb);
Rgb hsv_to_rgb(const Hsv& hsv);

HsvImage rgb_to_hsv(const Image& img);
Image hsv_to_rgb(const HsvImage& img);

// Mean of the three channels, one value per pixel in row-major order.
std::vector<double> to_gray(const Image& img);

}  // namespace nightbench
