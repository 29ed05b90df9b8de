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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace nightbench {

// SplitMix64 output finalizer.
std::uint64_t mix64(std::uint64_t x);

// Derives the seed of an independent substream, e.g. one per frame index.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Counter-based generator: the i-th 64-bit draw is mix64(seed + (i+1)*phi),
/// i.e. the SplitMix64 sequence. Every operation is defined with integer
/// arithmetic plus IEEE sqrt/log/cos, so streams do not depend on the
/// standard library's distribution implementations.
///
/// Single owner. Use derive_seed to hand independent streams to workers.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t counter() const { return counter_; }

  std::uint64_t next_u64();
  // Uniform in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi);
  // Standard normal via Box-Muller; the second variate of each pair is cached.
  double normal();

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
  std::optional<double> spare_;
};

/// n i.i.d. draws from N(mu, sigma^2). Throws ParameterError if sigma < 0.
std::vector<double> sample_gaussian(Rng& rng, double mu, double sigma, std::size_t n);

}  // namespace nightbench
