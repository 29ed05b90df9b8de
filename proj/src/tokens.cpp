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

#include "nightbench/tokens.hpp"

#include <cmath>
#include <string>

#include "nightbench/error.hpp"
#include "nightbench/rng.hpp"

namespace nightbench {

TokenSeq::TokenSeq(Eigen::MatrixXd tokens_in, int rows_in, int cols_in)
    : tokens(std::move(tokens_in)), rows(rows_in), cols(cols_in) {
  validate(*this);
}

TokenSeq TokenSeq::column(Eigen::MatrixXd tokens_in) {
  const int n = static_cast<int>(tokens_in.rows());
  return TokenSeq(std::move(tokens_in), n, 1);
}

TokenSeq TokenSeq::random(int rows_in, int cols_in, int dim, std::uint64_t seed) {
  if (rows_in < 1 || cols_in < 1 || dim < 1) throw ShapeError("random token sequence needs positive shape");
  Rng rng(seed);
  Eigen::MatrixXd m(rows_in * cols_in, dim);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = rng.normal();
  }
  return TokenSeq(std::move(m), rows_in, cols_in);
}

void validate(const TokenSeq& seq) {
  if (seq.tokens.rows() < 1 || seq.tokens.cols() < 1) {
    throw ShapeError("token sequence must have n >= 1 tokens of dimension d >= 1");
  }
  if (seq.rows < 1 || seq.cols < 1 || static_cast<Eigen::Index>(seq.rows) * seq.cols != seq.tokens.rows()) {
    throw ShapeError("token layout " + std::to_string(seq.rows) + "x" + std::to_string(seq.cols) +
                     " does not match " + std::to_string(seq.tokens.rows()) + " tokens");
  }
  if (!seq.tokens.allFinite()) throw NumericError("token sequence contains non-finite values");
}

DepthwiseKernel DepthwiseKernel::identity(int dim, int size) {
  DepthwiseKernel k;
  k.size = size;
  k.taps = Eigen::MatrixXd::Zero(dim, size * size);
  k.taps.col((size / 2) * size + size / 2).setOnes();
  return k;
}

namespace {

void check_kernel(const TokenSeq& seq, const DepthwiseKernel& kernel) {
  if (kernel.size < 1 || kernel.size % 2 == 0) throw ShapeError("depthwise kernel size must be odd");
  if (kernel.taps.rows() != seq.dim() || kernel.taps.cols() != kernel.size * kernel.size) {
    throw ShapeError("depthwise kernel shape does not match token dimension");
  }
}

}  // namespace

Eigen::MatrixXd depthwise_projection(const TokenSeq& seq, const DepthwiseKernel& kernel) {
  validate(seq);
  check_kernel(seq, kernel);
  const int half = kernel.size / 2;
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(seq.size(), seq.dim());
  for (int r = 0; r < seq.rows; ++r) {
    for (int c = 0; c < seq.cols; ++c) {
      const int dst = r * seq.cols + c;
      for (int i = 0; i < kernel.size; ++i) {
        const int rr = r + i - half;
        if (rr < 0 || rr >= seq.rows) continue;
        for (int j = 0; j < kernel.size; ++j) {
          const int cc = c + j - half;
          if (cc < 0 || cc >= seq.cols) continue;
          out.row(dst) += kernel.taps.col(i * kernel.size + j).transpose().cwiseProduct(seq.tokens.row(rr * seq.cols + cc));
        }
      }
    }
  }
  return out;
}

DepthwiseGradients depthwise_projection_backward(const TokenSeq& seq, const DepthwiseKernel& kernel,
                                                 const Eigen::MatrixXd& grad_output) {
  check_kernel(seq, kernel);
  const int half = kernel.size / 2;
  DepthwiseGradients g;
  g.input = Eigen::MatrixXd::Zero(seq.size(), seq.dim());
  g.taps = Eigen::MatrixXd::Zero(kernel.taps.rows(), kernel.taps.cols());
  for (int r = 0; r < seq.rows; ++r) {
    for (int c = 0; c < seq.cols; ++c) {
      const int dst = r * seq.cols + c;
      for (int i = 0; i < kernel.size; ++i) {
        const int rr = r + i - half;
        if (rr < 0 || rr >= seq.rows) continue;
        for (int j = 0; j < kernel.size; ++j) {
          const int cc = c + j - half;
          if (cc < 0 || cc >= seq.cols) continue;
          const int src = rr * seq.cols + cc;
          const int tap = i * kernel.size + j;
          g.taps.col(tap) += grad_output.row(dst).cwiseProduct(seq.tokens.row(src)).transpose();
          g.input.row(src) += grad_output.row(dst).cwiseProduct(kernel.taps.col(tap).transpose());
        }
      }
    }
  }
  return g;
}

Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& logits) {
  Eigen::MatrixXd out(logits.rows(), logits.cols());
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    const double m = logits.row(i).maxCoeff();
    out.row(i) = (logits.row(i).array() - m).exp().matrix();
    out.row(i) /= out.row(i).sum();
  }
  return out;
}

Eigen::MatrixXd scaled_dot_attention(const Eigen::MatrixXd& queries, const Eigen::MatrixXd& keys,
                                     const Eigen::MatrixXd& values, Eigen::MatrixXd* weights) {
  if (queries.cols() != keys.cols() || keys.rows() != values.rows()) {
    throw ShapeError("attention operands have inconsistent shapes");
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(keys.cols()));
  Eigen::MatrixXd p = softmax_rows((queries * keys.transpose()) * scale);
  Eigen::MatrixXd out = p * values;
  if (weights != nullptr) *weights = std::move(p);
  return out;
}

AttentionGradients scaled_dot_attention_backward(const Eigen::MatrixXd& queries, const Eigen::MatrixXd& keys,
                                                 const Eigen::MatrixXd& values, const Eigen::MatrixXd& grad_output) {
  const double scale = 1.0 / std::sqrt(static_cast<double>(keys.cols()));
  const Eigen::MatrixXd p = softmax_rows((queries * keys.transpose()) * scale);

  AttentionGradients g;
  g.values = p.transpose() * grad_output;
  const Eigen::MatrixXd grad_p = grad_output * values.transpose();
  const Eigen::VectorXd row_dot = grad_p.cwiseProduct(p).rowwise().sum();
  const Eigen::MatrixXd grad_logits = p.cwiseProduct(grad_p.colwise() - row_dot) * scale;
  g.queries = grad_logits * keys;
  g.keys = grad_logits.transpose() * queries;
  return g;
}

Eigen::MatrixXd random_uniform_matrix(int rows, int cols, double scale, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = rng.uniform(-scale, scale);
  }
  return m;
}

}  // namespace nightbench
