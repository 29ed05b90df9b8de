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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nightbench/box.hpp"
#include "nightbench/metrics.hpp"

namespace nightbench {

inline constexpr const char* kGroundTruthFile = "groundtruth.txt";

// A GOT-10K style sequence directory: numerically named frames plus a
// comma-separated groundtruth.txt with one `x,y,w,h` line per frame.
// Absence/cover label files shipped with GOT-10K are ignored.
struct SequenceManifest {
  std::string id;
  std::filesystem::path dir;
  std::vector<std::filesystem::path> frames;
  std::vector<BoundingBox> groundtruth;
  int width = 0;
  int height = 0;

  std::size_t size() const { return frames.size(); }
};

// Parses `x,y,w,h` records. LF and CRLF endings are accepted and blank lines
// are skipped; every other malformed line is a ParseError naming the line.
std::vector<BoundingBox> parse_groundtruth(const std::filesystem::path& path);
std::vector<BoundingBox> parse_groundtruth_text(std::string_view text, std::string_view source = "<text>");

// Same layout, but `nan,nan,nan,nan` denotes a frame with no prediction.
std::vector<std::optional<BoundingBox>> parse_prediction_text(std::string_view text,
                                                              std::string_view source = "<text>");

// Shortest round-trip decimal, so write -> parse is lossless.
std::string format_coordinate(double v);
std::string format_box_line(const std::optional<BoundingBox>& box);

void write_groundtruth(std::span<const BoundingBox> boxes, const std::filesystem::path& path);

SequenceManifest load_sequence(const std::filesystem::path& dir);

// Writes the predicted boxes of a run, one line per frame, LF terminated.
void write_predictions(const TrackRun& run, const std::filesystem::path& path);

// Pairs a prediction file with the manifest's ground truth. The line count
// must match the manifest frame count.
TrackRun parse_predictions(const std::filesystem::path& path, const SequenceManifest& manifest);

}  // namespace nightbench
