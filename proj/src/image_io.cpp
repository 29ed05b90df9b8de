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

#include "nightbench/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "nightbench/error.hpp"

namespace nightbench {

namespace fs = std::filesystem;

namespace {

std::string lower_extension(const fs::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext;
}

[[noreturn]] void fail(const fs::path& path, const std::string& what) {
  throw IoError(path.string() + ": " + what);
}

Image from_bytes(int height, int width, const std::vector<std::uint8_t>& bytes) {
  std::vector<double> data(bytes.size());
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    data[i] = bytes[i] / 255.0;
  }
  return Image(height, width, std::move(data));
}

std::vector<std::uint8_t> to_bytes(const Image& img) {
  const auto data = img.data();
  std::vector<std::uint8_t> bytes(data.size());
  std::transform(data.begin(), data.end(), bytes.begin(), quantize_channel);
  return bytes;
}

// Reads one whitespace-delimited header token, skipping '#' comments.
std::string ppm_token(std::istream& in) {
  std::string token;
  int ch;
  while ((ch = in.get()) != EOF) {
    if (ch == '#') {
      while ((ch = in.get()) != EOF && ch != '\n') {
      }
      continue;
    }
    if (std::isspace(ch)) {
      if (!token.empty()) break;
      continue;
    }
    token.push_back(static_cast<char>(ch));
  }
  return token;
}

int ppm_int(std::istream& in, const fs::path& path, const char* field) {
  const std::string token = ppm_token(in);
  if (token.empty() || !std::all_of(token.begin(), token.end(), [](unsigned char c) { return std::isdigit(c); })) {
    fail(path, std::string("malformed PPM header (") + field + ")");
  }
  try {
    return std::stoi(token);
  } catch (const std::exception&) {
    fail(path, std::string("malformed PPM header (") + field + ")");
  }
}

Image read_ppm(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "cannot open file");

  if (ppm_token(in) != "P6") fail(path, "malformed PPM header (expected P6 magic)");
  const int width = ppm_int(in, path, "width");
  const int height = ppm_int(in, path, "height");
  const int maxval = ppm_int(in, path, "maxval");
  if (width <= 0 || height <= 0) fail(path, "malformed PPM header (non-positive dimensions)");
  if (maxval != 255) fail(path, "unsupported bit depth (maxval " + std::to_string(maxval) + ", expected 255)");

  std::vector<std::uint8_t> bytes(static_cast<std::size_t>(width) * height * 3);
  in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (in.gcount() != static_cast<std::streamsize>(bytes.size())) fail(path, "truncated PPM pixel data");
  return from_bytes(height, width, bytes);
}

void write_ppm(const Image& img, const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(path, "cannot open file for writing");
  out << "P6\n" << img.width() << ' ' << img.height() << "\n255\n";
  const auto bytes = to_bytes(img);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(path, "write failed");
}

Image read_png(const fs::path& path) {
  if (!fs::exists(path)) fail(path, "cannot open file");

  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str())) {
    fail(path, std::string("malformed PNG: ") + image.message);
  }
  if (image.format & PNG_FORMAT_FLAG_LINEAR) {
    png_image_free(&image);
    fail(path, "unsupported bit depth (16-bit PNG)");
  }
  image.format = PNG_FORMAT_RGB;
  std::vector<std::uint8_t> bytes(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, bytes.data(), 0, nullptr)) {
    const std::string message = image.message;
    png_image_free(&image);
    fail(path, "malformed PNG: " + message);
  }
  return from_bytes(static_cast<int>(image.height), static_cast<int>(image.width), bytes);
}

void write_png(const Image& img, const fs::path& path) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width());
  image.height = static_cast<png_uint_32>(img.height());
  image.format = PNG_FORMAT_RGB;
  const auto bytes = to_bytes(img);
  if (!png_image_write_to_file(&image, path.c_str(), 0, bytes.data(), 0, nullptr)) {
    fail(path, std::string("PNG write failed: ") + image.message);
  }
}

}  // namespace

ImageFormat image_format_for(const fs::path& path) {
  const std::string ext = lower_extension(path);
  if (ext == ".png") return ImageFormat::kPng;
  if (ext == ".ppm") return ImageFormat::kPpm;
  fail(path, "unsupported image format '" + ext + "' (expected .png or .ppm)");
}

bool is_supported_image(const fs::path& path) {
  const std::string ext = lower_extension(path);
  return ext == ".png" || ext == ".ppm";
}

std::uint8_t quantize_channel(double v) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

Image read_image(const fs::path& path) {
  switch (image_format_for(path)) {
    case ImageFormat::kPng: return read_png(path);
    case ImageFormat::kPpm: return read_ppm(path);
  }
  fail(path, "unreachable");
}

void write_image(const Image& img, const fs::path& path) {
  if (img.width() <= 0 || img.height() <= 0) fail(path, "cannot write an empty image");
  switch (image_format_for(path)) {
    case ImageFormat::kPng: write_png(img, path); return;
    case ImageFormat::kPpm: write_ppm(img, path); return;
  }
}

}  // namespace nightbench
