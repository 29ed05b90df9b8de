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

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "nightbench/tokens.hpp"

namespace nightbench {

// Depthwise convolution followed by a linear map: y = dw(x) * weight + bias.
// Row-vector convention throughout; bias is 1 x d.
struct Projection {
  DepthwiseKernel depthwise;
  Eigen::MatrixXd weight;
  Eigen::MatrixXd bias;
};

/// Parameters of one mixed attention module. The q/k/v projections are
/// shared by the target and search streams; each stream is convolved over its
/// own grid.
struct MamParams {
  Projection query;
  Projection key;
  Projection value;
  Eigen::MatrixXd out_weight;
  Eigen::MatrixXd out_bias;

  int dim() const { return static_cast<int>(out_weight.rows()); }

  // Identity depthwise taps and weights, zero biases.
  static MamParams identity(int dim, int kernel_size = 3);
  // Every entry uniform in [-scale, scale], one derived stream per tensor.
  static MamParams random(int dim, std::uint64_t seed, double scale = 0.1, int kernel_size = 3);
  static MamParams zeros_like(const MamParams& other);

  template <typename Fn>
  void for_each_tensor(Fn&& fn) {
    for (Projection* p : {&query, &key, &value}) {
      fn(p->depthwise.taps);
      fn(p->weight);
      fn(p->bias);
    }
    fn(out_weight);
    fn(out_bias);
  }
  template <typename Fn>
  void for_each_tensor(Fn&& fn) const {
    for (const Projection* p : {&query, &key, &value}) {
      fn(p->depthwise.taps);
      fn(p->weight);
      fn(p->bias);
    }
    fn(out_weight);
    fn(out_bias);
  }
};

void validate(const MamParams& p);

struct MixedAttentionResult {
  TokenSeq target;
  TokenSeq search;
  // Attention outputs before the output projection.
  Eigen::MatrixXd attention_target;
  Eigen::MatrixXd attention_search;
  // Row-stochastic weights over the concatenated [target; search] keys.
  Eigen::MatrixXd weights_target;
  Eigen::MatrixXd weights_search;
};

/// Mixed attention: both streams are projected to q/k/v, keys and values are
/// concatenated as k_m = [k_t; k_s], v_m = [v_t; v_s], and each stream's
/// queries attend over the joint sequence,
///   attn_t = softmax(q_t k_m^T / sqrt(d)) v_m,  attn_s = softmax(q_s k_m^T / sqrt(d)) v_m.
/// The stacked [attn_t; attn_s] then goes through the output projection and
/// is split back into the two streams.
MixedAttentionResult mixed_attention(const TokenSeq& target, const TokenSeq& search, const MamParams& p);

struct MixedAttentionGradients {
  MamParams params;
  Eigen::MatrixXd target;
  Eigen::MatrixXd search;
};

// Gradients of sum(grad_target .* out_t) + sum(grad_search .* out_s).
MixedAttentionGradients mixed_attention_backward(const TokenSeq& target, const TokenSeq& search,
                                                 const MamParams& p, const Eigen::MatrixXd& grad_target,
                                                 const Eigen::MatrixXd& grad_search);

template <typename Params>
std::vector<double> flatten_params(const Params& p) {
  std::vector<double> out;
  p.for_each_tensor([&](const Eigen::MatrixXd& m) { out.insert(out.end(), m.data(), m.data() + m.size()); });
  return out;
}

template <typename Params>
void unflatten_params(std::span<const double> values, Params& p) {
  std::size_t offset = 0;
  p.for_each_tensor([&](Eigen::MatrixXd& m) {
    std::copy(values.begin() + static_cast<std::ptrdiff_t>(offset),
              values.begin() + static_cast<std::ptrdiff_t>(offset + m.size()), m.data());
    offset += static_cast<std::size_t>(m.size());
  });
}

}  // namespace nightbench
