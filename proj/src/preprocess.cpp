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

#include "nightbench/preprocess.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <system_error>
#include <vector>

#include "nightbench/error.hpp"
#include "nightbench/image_io.hpp"

namespace nightbench {

namespace fs = std::filesystem;

namespace {

constexpr std::size_t kMaxDiagnosticBytes = 2048;

double parse_number(std::string_view text, std::string_view what) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw UsageError("invalid " + std::string(what) + " '" + std::string(text) + "' in preprocess spec");
  }
  return value;
}

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  out += "'";
  return out;
}

std::string replace_all(std::string text, std::string_view from, const std::string& to) {
  std::size_t pos = 0;
  while ((pos = text.find(from, pos)) != std::string::npos) {
    text.replace(pos, from.size(), to);
    pos += to.size();
  }
  return text;
}

std::string read_diagnostics(const fs::path& log) {
  std::ifstream in(log, std::ios::binary);
  if (!in) return {};
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (text.size() > kMaxDiagnosticBytes) text = text.substr(text.size() - kMaxDiagnosticBytes);
  return text;
}

// Removes the listed files when it goes out of scope.
class TempFiles {
 public:
  explicit TempFiles(std::vector<fs::path> paths) : paths_(std::move(paths)) {}
  ~TempFiles() {
    std::error_code ec;
    for (const auto& p : paths_) fs::remove(p, ec);
  }
  TempFiles(const TempFiles&) = delete;
  TempFiles& operator=(const TempFiles&) = delete;

 private:
  std::vector<fs::path> paths_;
};

Image run_external(const Image& img, const PreprocessSpec& spec) {
  static std::atomic<unsigned long long> counter{0};
  const fs::path dir = preprocess_temp_dir();
  std::error_code ec;
  fs::create_directories(dir, ec);

  const std::string stem =
      "nightbench-" + std::to_string(::getpid()) + "-" + std::to_string(counter.fetch_add(1));
  const fs::path in_path = dir / (stem + "-in.png");
  const fs::path out_path = dir / (stem + "-out.png");
  const fs::path log_path = dir / (stem + ".log");
  TempFiles cleanup({in_path, out_path, log_path});

  write_image(img, in_path);
  std::string cmd = replace_all(spec.command, "{in}", shell_quote(in_path.string()));
  cmd = replace_all(cmd, "{out}", shell_quote(out_path.string()));
  const std::string full = "( " + cmd + " ) > " + shell_quote(log_path.string()) + " 2>&1";

  const int status = std::system(full.c_str());
  if (status == -1 || !WIFEXITED(status) || WEXITSTATUS(status) != 0) {
    const int code = (status != -1 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
    throw PreprocessError("external preprocess command failed (exit " + std::to_string(code) + "): " + cmd +
                          "\n" + read_diagnostics(log_path));
  }
  try {
    Image out = read_image(out_path);
    if (out.height() != img.height() || out.width() != img.width()) {
      throw PreprocessError("external preprocess changed frame size to " + std::to_string(out.width()) + "x" +
                            std::to_string(out.height()));
    }
    return out;
  } catch (const IoError& e) {
    throw PreprocessError(std::string("external preprocess produced no readable output: ") + e.what() + "\n" +
                          read_diagnostics(log_path));
  }
}

}  // namespace

void validate(const PreprocessSpec& spec) {
  using Kind = PreprocessSpec::Kind;
  switch (spec.kind) {
    case Kind::kNone: break;
    case Kind::kExternal:
      if (spec.command.empty() || spec.command.find("{in}") == std::string::npos ||
          spec.command.find("{out}") == std::string::npos) {
        throw UsageError("external preprocess command must contain {in} and {out} placeholders");
      }
      break;
    case Kind::kMedian:
      if (spec.radius < 1) throw UsageError("median radius must be >= 1");
      break;
    case Kind::kGaussianBlur:
      if (!(spec.sigma > 0.0)) throw UsageError("gaussian_blur sigma must be > 0");
      break;
    case Kind::kGammaBoost:
      if (!(spec.gamma > 0.0)) throw UsageError("gamma_boost gamma must be > 0");
      break;
  }
}

PreprocessSpec parse_preprocess_spec(std::string_view text) {
  PreprocessSpec spec;
  const std::size_t colon = text.find(':');
  const std::string_view name = text.substr(0, colon);
  const std::string_view arg = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  const bool has_arg = colon != std::string_view::npos;

  if (name == "none" || name.empty()) {
    spec.kind = PreprocessSpec::Kind::kNone;
  } else if (name == "median") {
    spec.kind = PreprocessSpec::Kind::kMedian;
    if (has_arg) {
      const double r = parse_number(arg, "median radius");
      if (r != std::floor(r)) throw UsageError("median radius must be an integer");
      spec.radius = static_cast<int>(r);
    }
  } else if (name == "gaussian_blur") {
    spec.kind = PreprocessSpec::Kind::kGaussianBlur;
    if (has_arg) spec.sigma = parse_number(arg, "gaussian_blur sigma");
  } else if (name == "gamma_boost") {
    spec.kind = PreprocessSpec::Kind::kGammaBoost;
    if (has_arg) spec.gamma = parse_number(arg, "gamma_boost gamma");
  } else if (name == "external") {
    spec.kind = PreprocessSpec::Kind::kExternal;
    spec.command = std::string(arg);
  } else {
    throw UsageError("unknown preprocess kind '" + std::string(name) + "'");
  }
  validate(spec);
  return spec;
}

std::string to_string(const PreprocessSpec& spec) {
  std::ostringstream ss;
  switch (spec.kind) {
    case PreprocessSpec::Kind::kNone: return "none";
    case PreprocessSpec::Kind::kExternal: return "external:" + spec.command;
    case PreprocessSpec::Kind::kMedian: ss << "median:" << spec.radius; break;
    case PreprocessSpec::Kind::kGaussianBlur: ss << "gaussian_blur:" << spec.sigma; break;
    case PreprocessSpec::Kind::kGammaBoost: ss << "gamma_boost:" << spec.gamma; break;
  }
  return ss.str();
}

fs::path preprocess_temp_dir() {
  if (const char* env = std::getenv("NIGHTBENCH_TMPDIR"); env != nullptr && *env != '\0') {
    return fs::path(env);
  }
  return fs::temp_directory_path();
}

Image median_filter(const Image& img, int radius) {
  if (radius < 1) throw ParameterError("median radius must be >= 1");
  Image out(img.height(), img.width());
  std::vector<double> window;
  window.reserve(static_cast<std::size_t>(2 * radius + 1) * (2 * radius + 1));
  for (int r = 0; r < img.height(); ++r) {
    for (int c = 0; c < img.width(); ++c) {
      for (int ch = 0; ch < 3; ++ch) {
        window.clear();
        for (int dr = -radius; dr <= radius; ++dr) {
          const int rr = std::clamp(r + dr, 0, img.height() - 1);
          for (int dc = -radius; dc <= radius; ++dc) {
            const int cc = std::clamp(c + dc, 0, img.width() - 1);
            window.push_back(img.at(rr, cc, ch));
          }
        }
        auto mid = window.begin() + static_cast<std::ptrdiff_t>(window.size() / 2);
        std::nth_element(window.begin(), mid, window.end());
        out.at(r, c, ch) = *mid;
      }
    }
  }
  return out;
}

Image gaussian_blur(const Image& img, double sigma) {
  if (!(sigma > 0.0)) throw ParameterError("gaussian_blur sigma must be > 0");
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    kernel[i + radius] = std::exp(-0.5 * (i * i) / (sigma * sigma));
    sum += kernel[i + radius];
  }
  for (auto& k : kernel) k /= sum;

  // Separable: horizontal then vertical pass, replicated borders.
  Image tmp(img.height(), img.width());
  for (int r = 0; r < img.height(); ++r) {
    for (int c = 0; c < img.width(); ++c) {
      for (int ch = 0; ch < 3; ++ch) {
        double acc = 0.0;
        for (int i = -radius; i <= radius; ++i) {
          acc += kernel[i + radius] * img.at(r, std::clamp(c + i, 0, img.width() - 1), ch);
        }
        tmp.at(r, c, ch) = clamp_unit(acc);
      }
    }
  }
  Image out(img.height(), img.width());
  for (int r = 0; r < img.height(); ++r) {
    for (int c = 0; c < img.width(); ++c) {
      for (int ch = 0; ch < 3; ++ch) {
        double acc = 0.0;
        for (int i = -radius; i <= radius; ++i) {
          acc += kernel[i + radius] * tmp.at(std::clamp(r + i, 0, img.height() - 1), c, ch);
        }
        out.at(r, c, ch) = clamp_unit(acc);
      }
    }
  }
  return out;
}

Image gamma_boost(const Image& img, double gamma) {
  if (!(gamma > 0.0)) throw ParameterError("gamma_boost gamma must be > 0");
  Image out = img;
  for (double& v : out.data()) v = clamp_unit(std::pow(v, 1.0 / gamma));
  return out;
}

Image preprocess_frame(const Image& img, const PreprocessSpec& spec) {
  validate(spec);
  switch (spec.kind) {
    case PreprocessSpec::Kind::kNone: return img;
    case PreprocessSpec::Kind::kMedian: return median_filter(img, spec.radius);
    case PreprocessSpec::Kind::kGaussianBlur: return gaussian_blur(img, spec.sigma);
    case PreprocessSpec::Kind::kGammaBoost: return gamma_boost(img, spec.gamma);
    case PreprocessSpec::Kind::kExternal: return run_external(img, spec);
  }
  return img;
}

}  // namespace nightbench
