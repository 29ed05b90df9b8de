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

#include "nightbench/dataset.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "nightbench/error.hpp"
#include "nightbench/image_io.hpp"

namespace nightbench {

namespace fs = std::filesystem;

namespace {

std::string_view trim(std::string_view s) {
  const auto not_space = [](char c) { return c != ' ' && c != '\t' && c != '\r' && c != '\n'; };
  while (!s.empty() && !not_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && !not_space(s.back())) s.remove_suffix(1);
  return s;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string() + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string line_error(std::string_view source, std::size_t line, std::string_view what) {
  return std::string(source) + ": line " + std::to_string(line) + ": " + std::string(what);
}

bool is_nan_token(std::string_view s) {
  return s == "nan" || s == "NaN" || s == "NAN" || s == "-nan";
}

// Splits on commas and parses four fields. Returns nullopt for an all-NaN
// record when allow_missing is set.
std::optional<BoundingBox> parse_record(std::string_view line, std::string_view source, std::size_t line_no,
                                        bool allow_missing) {
  std::array<double, 4> v{};
  std::size_t field = 0;
  std::size_t nan_fields = 0;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    const std::string_view token = trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start));
    if (field >= 4) {
      throw ParseError(line_error(source, line_no, "expected 4 comma-separated fields, got more"));
    }
    if (allow_missing && is_nan_token(token)) {
      v[field] = std::nan("");
      ++nan_fields;
    } else {
      if (token.empty()) {
        throw ParseError(line_error(source, line_no, "empty field " + std::to_string(field + 1)));
      }
      double value = 0.0;
      const char* begin = token.data();
      const char* end = token.data() + token.size();
      if (*begin == '+') ++begin;
      const auto [ptr, ec] = std::from_chars(begin, end, value);
      if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
        throw ParseError(line_error(source, line_no, "invalid number '" + std::string(token) + "'"));
      }
      v[field] = value;
    }
    ++field;
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (field != 4) {
    throw ParseError(line_error(source, line_no, "expected 4 comma-separated fields, got " + std::to_string(field)));
  }
  if (nan_fields == 4) return std::nullopt;
  if (nan_fields != 0) {
    throw ParseError(line_error(source, line_no, "partially missing box (mix of nan and numbers)"));
  }
  if (v[2] < 0.0 || v[3] < 0.0) {
    throw ParseError(line_error(source, line_no, "negative box extent"));
  }
  return BoundingBox{v[0], v[1], v[2], v[3]};
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t nl = text.find('\n', start);
    std::string_view line = text.substr(start, nl == std::string_view::npos ? text.npos : nl - start);
    ++line_no;
    if (!trim(line).empty()) fn(line, line_no);
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
}

std::optional<unsigned long long> numeric_stem(const fs::path& p) {
  const std::string stem = p.stem().string();
  if (stem.empty() || !std::all_of(stem.begin(), stem.end(), [](unsigned char c) { return std::isdigit(c); })) {
    return std::nullopt;
  }
  unsigned long long value = 0;
  const auto [ptr, ec] = std::from_chars(stem.data(), stem.data() + stem.size(), value);
  if (ec != std::errc()) return std::nullopt;
  return value;
}

void write_lines(const fs::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path.string() + ": cannot open file for writing");
  out << body;
  if (!out) throw IoError(path.string() + ": write failed");
}

}  // namespace

std::vector<BoundingBox> parse_groundtruth_text(std::string_view text, std::string_view source) {
  std::vector<BoundingBox> boxes;
  for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    boxes.push_back(*parse_record(line, source, line_no, false));
  });
  if (boxes.empty()) throw ParseError(std::string(source) + ": no annotations (empty file)");
  return boxes;
}

std::vector<BoundingBox> parse_groundtruth(const fs::path& path) {
  return parse_groundtruth_text(read_text(path), path.string());
}

std::vector<std::optional<BoundingBox>> parse_prediction_text(std::string_view text, std::string_view source) {
  std::vector<std::optional<BoundingBox>> boxes;
  for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    boxes.push_back(parse_record(line, source, line_no, true));
  });
  if (boxes.empty()) throw ParseError(std::string(source) + ": no predictions (empty file)");
  return boxes;
}

std::string format_coordinate(double v) {
  if (v == 0.0) return "0";  // folds -0
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string format_box_line(const std::optional<BoundingBox>& box) {
  if (!box) return "nan,nan,nan,nan";
  return format_coordinate(box->x) + "," + format_coordinate(box->y) + "," + format_coordinate(box->w) + "," +
         format_coordinate(box->h);
}

void write_groundtruth(std::span<const BoundingBox> boxes, const fs::path& path) {
  std::string body;
  for (const auto& b : boxes) body += format_box_line(b) + "\n";
  write_lines(path, body);
}

SequenceManifest load_sequence(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw LoadError(dir.string() + ": not a sequence directory");

  SequenceManifest m;
  m.dir = dir;
  m.id = fs::path(dir).lexically_normal().filename().string();
  if (m.id.empty()) m.id = fs::path(dir).lexically_normal().parent_path().filename().string();

  const fs::path gt_path = dir / kGroundTruthFile;
  if (!fs::exists(gt_path)) throw LoadError(dir.string() + ": missing " + kGroundTruthFile);

  std::vector<std::pair<unsigned long long, fs::path>> numbered;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file() || !is_supported_image(entry.path())) continue;
    if (auto n = numeric_stem(entry.path())) numbered.emplace_back(*n, entry.path());
  }
  if (numbered.empty()) throw LoadError(dir.string() + ": no numbered .png/.ppm frames");
  std::sort(numbered.begin(), numbered.end());
  for (std::size_t i = 1; i < numbered.size(); ++i) {
    if (numbered[i].first == numbered[i - 1].first) {
      throw LoadError(dir.string() + ": duplicate frame number " + std::to_string(numbered[i].first));
    }
  }
  for (auto& [n, p] : numbered) m.frames.push_back(std::move(p));

  try {
    m.groundtruth = parse_groundtruth(gt_path);
  } catch (const ParseError& e) {
    throw LoadError(e.what());
  }
  if (m.groundtruth.size() != m.frames.size()) {
    throw LoadError(dir.string() + ": frame count " + std::to_string(m.frames.size()) +
                    " does not match ground-truth count " + std::to_string(m.groundtruth.size()));
  }

  const Image first = read_image(m.frames.front());
  m.width = first.width();
  m.height = first.height();
  return m;
}

void write_predictions(const TrackRun& run, const fs::path& path) {
  std::string body;
  for (const auto& f : run.frames) body += format_box_line(f.pred) + "\n";
  write_lines(path, body);
}

TrackRun parse_predictions(const fs::path& path, const SequenceManifest& manifest) {
  const auto preds = parse_prediction_text(read_text(path), path.string());
  if (preds.size() != manifest.groundtruth.size()) {
    throw LoadError(path.string() + ": prediction count " + std::to_string(preds.size()) +
                    " does not match sequence '" + manifest.id + "' frame count " +
                    std::to_string(manifest.groundtruth.size()));
  }
  TrackRun run{manifest.id, {}};
  run.frames.reserve(preds.size());
  for (std::size_t i = 0; i < preds.size(); ++i) {
    run.frames.push_back({manifest.groundtruth[i], preds[i]});
  }
  return run;
}

}  // namespace nightbench
