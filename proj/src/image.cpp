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

#include "nightbench/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nightbench/error.hpp"

namespace nightbench {

namespace {

void check_dims(int height, int width) {
  if (height < 0 || width < 0) {
    throw ParameterError("image dimensions must be non-negative, got " + std::to_string(height) + "x" +
                         std::to_string(width));
  }
}

}  // namespace

Image::Image(int height, int width, double fill) : height_(height), width_(width) {
  check_dims(height, width);
  if (!(fill >= 0.0 && fill <= 1.0)) {
    throw ParameterError("image fill value must lie in [0,1]");
  }
  data_.assign(static_cast<std::size_t>(height) * width * 3, fill);
}

Image::Image(int height, int width, std::vector<double> data)
    : height_(height), width_(width), data_(std::move(data)) {
  check_dims(height, width);
  if (data_.size() != static_cast<std::size_t>(height) * width * 3) {
    throw ParameterError("image data length " + std::to_string(data_.size()) + " does not match " +
                         std::to_string(height) + "x" + std::to_string(width) + "x3");
  }
  for (double v : data_) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw ParameterError("image channel value outside [0,1]");
    }
  }
}

void Image::set_pixel(int row, int col, const Rgb& rgb) {
  const std::size_t i = index(row, col, 0);
  data_[i] = rgb.r;
  data_[i + 1] = rgb.g;
  data_[i + 2] = rgb.b;
}

HsvImage::HsvImage(int height, int width) : height_(height), width_(width) {
  check_dims(height, width);
  data_.resize(static_cast<std::size_t>(height) * width);
}

double clamp_unit(double v) { return std::clamp(v, 0.0, 1.0); }

Hsv rgb_to_hsv(const Rgb& rgb) {
  const double maxc = std::max({rgb.r, rgb.g, rgb.b});
  const double minc = std::min({rgb.r, rgb.g, rgb.b});
  const double delta = maxc - minc;

  Hsv out;
  out.v = maxc;
  out.s = maxc > 0.0 ? delta / maxc : 0.0;
  if (delta <= 0.0) {
    out.h = 0.0;
    return out;
  }

  double h;
  if (maxc == rgb.r) {
    h = 60.0 * std::fmod((rgb.g - rgb.b) / delta, 6.0);
  } else if (maxc == rgb.g) {
    h = 60.0 * ((rgb.b - rgb.r) / delta + 2.0);
  } else {
    h = 60.0 * ((rgb.r - rgb.g) / delta + 4.0);
  }
  if (h < 0.0) h += 360.0;
  if (h >= 360.0) h -= 360.0;
  out.h = h;
  return out;
}

Rgb hsv_to_rgb(const Hsv& hsv) {
  const double s = clamp_unit(hsv.s);
  const double v = clamp_unit(hsv.v);
  if (s == 0.0) {
    return {v, v, v};
  }

  double h = std::fmod(hsv.h, 360.0);
  if (h < 0.0) h += 360.0;

  const double chroma = v * s;
  const double sector = h / 60.0;
  const double x = chroma * (1.0 - std::fabs(std::fmod(sector, 2.0) - 1.0));
  const double m = v - chroma;

  double r = 0.0, g = 0.0, b = 0.0;
  switch (static_cast<int>(sector)) {
    case 0: r = chroma; g = x; break;
    case 1: r = x; g = chroma; break;
    case 2: g = chroma; b = x; break;
    case 3: g = x; b = chroma; break;
    case 4: r = x; b = chroma; break;
    default: r = chroma; b = x; break;
  }
  return {clamp_unit(r + m), clamp_unit(g + m), clamp_unit(b + m)};
}

HsvImage rgb_to_hsv(const Image& img) {
  HsvImage out(img.height(), img.width());
  for (int r = 0; r < img.height(); ++r) {
    for (int c = 0; c < img.width(); ++c) {
      out.at(r, c) = rgb_to_hsv(img.pixel(r, c));
    }
  }
  return out;
}

Image hsv_to_rgb(const HsvImage& img) {
  Image out(img.height(), img.width());
  for (int r = 0; r < img.height(); ++r) {
    for (int c = 0; c < img.width(); ++c) {
      out.set_pixel(r, c, hsv_to_rgb(img.at(r, c)));
    }
  }
  return out;
}

std::vector<double> to_gray(const Image& img) {
  std::vector<double> gray(img.pixel_count());
  const auto data = img.data();
  for (std::size_t i = 0; i < gray.size(); ++i) {
    gray[i] = (data[3 * i] + data[3 * i + 1] + data[3 * i + 2]) / 3.0;
  }
  return gray;
}

}  // namespace nightbench
