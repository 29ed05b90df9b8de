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

#include "nightbench/model_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "nightbench/error.hpp"

namespace nightbench {

namespace {

constexpr std::string_view kMagic = "nightbench-params";
constexpr int kVersion = 1;

template <typename Params>
void write_impl(std::ostream& out, std::string_view kind, const Params& p) {
  std::size_t count = 0;
  p.for_each_tensor([&](const Eigen::MatrixXd&) { ++count; });
  out << kMagic << ' ' << kVersion << ' ' << kind << ' ' << count << '\n';
  char buf[32];
  p.for_each_tensor([&](const Eigen::MatrixXd& m) {
    out << m.rows() << ' ' << m.cols() << '\n';
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        std::snprintf(buf, sizeof(buf), "%.17g", m(r, c));
        if (c > 0) out << ' ';
        out << buf;
      }
      out << '\n';
    }
  });
}

// Whitespace tokenizer that skips '#' comment lines.
class Tokens {
 public:
  Tokens(std::istream& in, std::string_view source) : in_(in), source_(source) {}

  std::string next(std::string_view what) {
    std::string tok;
    while (!(line_ >> tok)) {
      std::string text;
      if (!std::getline(in_, text)) throw ParseError(source_ + ": unexpected end of file reading " + std::string(what));
      ++line_no_;
      if (!text.empty() && text.front() == '#') continue;
      line_.clear();
      line_.str(text);
    }
    return tok;
  }

  long long next_int(std::string_view what) {
    const std::string tok = next(what);
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size()) fail("bad " + std::string(what) + " '" + tok + "'");
    return v;
  }

  double next_double(std::string_view what) {
    const std::string tok = next(what);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size() || !std::isfinite(v)) fail("bad " + std::string(what) + " '" + tok + "'");
    return v;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(source_ + ":" + std::to_string(line_no_) + ": " + msg);
  }

 private:
  std::istream& in_;
  std::string source_;
  std::istringstream line_;
  std::size_t line_no_ = 0;
};

// Reads tensors into `p`, resizing each to the recorded shape.
template <typename Params>
void read_impl(std::istream& in, std::string_view source, std::string_view kind, Params& p) {
  Tokens tok(in, source);
  if (tok.next("header") != kMagic) tok.fail("not a parameter file");
  if (tok.next_int("version") != kVersion) tok.fail("unsupported parameter file version");
  if (const std::string k = tok.next("kind"); k != kind) tok.fail("expected kind '" + std::string(kind) + "', got '" + k + "'");
  const long long count = tok.next_int("tensor count");
  long long expected = 0;
  p.for_each_tensor([&](const Eigen::MatrixXd&) { ++expected; });
  if (count != expected) tok.fail("expected " + std::to_string(expected) + " tensors, got " + std::to_string(count));
  p.for_each_tensor([&](Eigen::MatrixXd& m) {
    const long long rows = tok.next_int("rows");
    const long long cols = tok.next_int("cols");
    if (rows < 1 || cols < 1) tok.fail("tensor shape must be positive");
    m.resize(rows, cols);
    for (long long r = 0; r < rows; ++r) {
      for (long long c = 0; c < cols; ++c) m(r, c) = tok.next_double("value");
    }
  });
}

template <typename Params>
void save_impl(const std::filesystem::path& path, const Params& p) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path.string() + ": cannot open file for writing");
  write_params(out, p);
  if (!out) throw IoError(path.string() + ": write failed");
}

std::ifstream open_for_read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string() + ": cannot open file");
  return in;
}

}  // namespace

void write_params(std::ostream& out, const MamParams& p) { write_impl(out, "mam", p); }
void write_params(std::ostream& out, const SpmParams& p) { write_impl(out, "spm", p); }

MamParams read_mam_params(std::istream& in, std::string_view source) {
  MamParams p = MamParams::identity(1);
  read_impl(in, source, "mam", p);
  for (Projection* proj : {&p.query, &p.key, &p.value}) {
    const auto k = static_cast<int>(std::lround(std::sqrt(static_cast<double>(proj->depthwise.taps.cols()))));
    if (k * k != proj->depthwise.taps.cols()) {
      throw ShapeError(std::string(source) + ": depthwise taps must have k*k columns");
    }
    proj->depthwise.size = k;
  }
  validate(p);
  return p;
}

SpmParams read_spm_params(std::istream& in, std::string_view source) {
  SpmParams p = SpmParams::random(1, 1, 0);
  read_impl(in, source, "spm", p);
  validate(p);
  return p;
}

void save_params(const std::filesystem::path& path, const MamParams& p) { save_impl(path, p); }
void save_params(const std::filesystem::path& path, const SpmParams& p) { save_impl(path, p); }

MamParams load_mam_params(const std::filesystem::path& path) {
  auto in = open_for_read(path);
  return read_mam_params(in, path.string());
}

SpmParams load_spm_params(const std::filesystem::path& path) {
  auto in = open_for_read(path);
  return read_spm_params(in, path.string());
}

}  // namespace nightbench
