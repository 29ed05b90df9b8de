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

#include "nightbench/image.hpp"

namespace nightbench {

enum class ImageFormat { kPng, kPpm };

// Chooses the format from the extension (.png, .ppm). Throws IoError otherwise.
ImageFormat image_format_for(const std::filesystem::path& path);
bool is_supported_image(const std::filesystem::path& path);

// 8-bit PNG or binary PPM (P6, maxval 255). A stored byte c reads as c / 255.
Image read_image(const std::filesystem::path& path);

// Each channel v is stored as round(clamp(v, 0, 1) * 255).
void write_image(const Image& img, const std::filesystem::path& path);

std::uint8_t quantize_channel(double v);

}  // namespace nightbench
