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

namespace nightbench {

/// n x d token matrix laid out on a rows x cols grid (token r*cols + c sits
/// at grid position (r, c)). The grid is what the depthwise projection
/// convolves over.
struct TokenSeq {
  Eigen::MatrixXd tokens;
  int rows = 0;
  int cols = 0;

  TokenSeq() = default;
  TokenSeq(Eigen::MatrixXd tokens, int rows, int cols);

  // n x 1 grid.
  static TokenSeq column(Eigen::MatrixXd tokens);
  // Entries drawn from N(0, 1) with the library generator.
  static TokenSeq random(int rows, int cols, int dim, std::uint64_t seed);

  int size() const { return static_cast<int>(tokens.rows()); }
  int dim() const { return static_cast<int>(tokens.cols()); }
};

// ShapeError on an empty sequence or grid mismatch, NumericError on NaN/inf.
void validate(const TokenSeq& seq);

// Per-channel k x k filter taps, stored as a d x (k*k) matrix; tap (i, j)
// lives in column i*k + j and multiplies the token at offset (i - k/2, j - k/2).
struct DepthwiseKernel {
  int size = 3;
  Eigen::MatrixXd taps;

  static DepthwiseKernel identity(int dim, int size = 3);
};

// Zero-padded, stride-1, shape-preserving per-channel 2-D correlation.
Eigen::MatrixXd depthwise_projection(const TokenSeq& seq, const DepthwiseKernel& kernel);

struct DepthwiseGradients {
  Eigen::MatrixXd input;
  Eigen::MatrixXd taps;
};
DepthwiseGradients depthwise_projection_backward(const TokenSeq& seq, const DepthwiseKernel& kernel,
                                                 const Eigen::MatrixXd& grad_output);

// Numerically stable row-wise softmax.
Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& logits);

// softmax(Q K^T / sqrt(d)) V. The row-stochastic weight matrix is written to
// `weights` when non-null.
Eigen::MatrixXd scaled_dot_attention(const Eigen::MatrixXd& queries, const Eigen::MatrixXd& keys,
                                     const Eigen::MatrixXd& values, Eigen::MatrixXd* weights = nullptr);

struct AttentionGradients {
  Eigen::MatrixXd queries;
  Eigen::MatrixXd keys;
  Eigen::MatrixXd values;
};
AttentionGradients scaled_dot_attention_backward(const Eigen::MatrixXd& queries, const Eigen::MatrixXd& keys,
                                                 const Eigen::MatrixXd& values, const Eigen::MatrixXd& grad_output);

// Uniform entries in [-scale, scale].
Eigen::MatrixXd random_uniform_matrix(int rows, int cols, double scale, std::uint64_t seed);

}  // namespace nightbench
