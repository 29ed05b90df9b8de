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

#include "nightbench/attention.hpp"

#include "nightbench/error.hpp"
#include "nightbench/rng.hpp"

namespace nightbench {

namespace {

Eigen::MatrixXd vstack(const Eigen::MatrixXd& top, const Eigen::MatrixXd& bottom) {
  Eigen::MatrixXd out(top.rows() + bottom.rows(), top.cols());
  out << top, bottom;
  return out;
}

Eigen::MatrixXd project(const TokenSeq& seq, const Projection& p) {
  Eigen::MatrixXd y = depthwise_projection(seq, p.depthwise) * p.weight;
  y.rowwise() += p.bias.row(0);
  return y;
}

void check_projection(const Projection& p, int d, const char* name) {
  if (p.weight.rows() != d || p.weight.cols() != d || p.bias.rows() != 1 || p.bias.cols() != d ||
      p.depthwise.taps.rows() != d || p.depthwise.taps.cols() != p.depthwise.size * p.depthwise.size) {
    throw ShapeError(std::string("mixed attention ") + name + " projection has inconsistent shapes");
  }
}

// Accumulates gradients of one projection applied to both streams.
void projection_backward(const TokenSeq& target, const TokenSeq& search, const Projection& p,
                         const Eigen::MatrixXd& grad_t, const Eigen::MatrixXd& grad_s, Projection& grad_p,
                         Eigen::MatrixXd& grad_target, Eigen::MatrixXd& grad_search) {
  const Eigen::MatrixXd dw_t = depthwise_projection(target, p.depthwise);
  const Eigen::MatrixXd dw_s = depthwise_projection(search, p.depthwise);
  grad_p.weight += dw_t.transpose() * grad_t + dw_s.transpose() * grad_s;
  grad_p.bias += grad_t.colwise().sum() + grad_s.colwise().sum();

  const auto gt = depthwise_projection_backward(target, p.depthwise, grad_t * p.weight.transpose());
  const auto gs = depthwise_projection_backward(search, p.depthwise, grad_s * p.weight.transpose());
  grad_p.depthwise.taps += gt.taps + gs.taps;
  grad_target += gt.input;
  grad_search += gs.input;
}

}  // namespace

MamParams MamParams::identity(int dim, int kernel_size) {
  MamParams p;
  for (Projection* proj : {&p.query, &p.key, &p.value}) {
    proj->depthwise = DepthwiseKernel::identity(dim, kernel_size);
    proj->weight = Eigen::MatrixXd::Identity(dim, dim);
    proj->bias = Eigen::MatrixXd::Zero(1, dim);
  }
  p.out_weight = Eigen::MatrixXd::Identity(dim, dim);
  p.out_bias = Eigen::MatrixXd::Zero(1, dim);
  return p;
}

MamParams MamParams::random(int dim, std::uint64_t seed, double scale, int kernel_size) {
  MamParams p = identity(dim, kernel_size);
  std::uint64_t stream = 0;
  p.for_each_tensor([&](Eigen::MatrixXd& m) {
    m = random_uniform_matrix(static_cast<int>(m.rows()), static_cast<int>(m.cols()), scale,
                              derive_seed(seed, stream++));
  });
  return p;
}

MamParams MamParams::zeros_like(const MamParams& other) {
  MamParams p = other;
  p.for_each_tensor([](Eigen::MatrixXd& m) { m.setZero(); });
  return p;
}

void validate(const MamParams& p) {
  const int d = p.dim();
  if (d < 1 || p.out_weight.cols() != d || p.out_bias.rows() != 1 || p.out_bias.cols() != d) {
    throw ShapeError("mixed attention output projection has inconsistent shapes");
  }
  check_projection(p.query, d, "query");
  check_projection(p.key, d, "key");
  check_projection(p.value, d, "value");
  p.for_each_tensor([](const Eigen::MatrixXd& m) {
    if (!m.allFinite()) throw NumericError("mixed attention parameters contain non-finite values");
  });
}

MixedAttentionResult mixed_attention(const TokenSeq& target, const TokenSeq& search, const MamParams& p) {
  validate(target);
  validate(search);
  validate(p);
  if (target.dim() != search.dim() || target.dim() != p.dim()) {
    throw ShapeError("target, search and parameter dimensions must agree");
  }

  const Eigen::MatrixXd keys = vstack(project(target, p.key), project(search, p.key));
  const Eigen::MatrixXd values = vstack(project(target, p.value), project(search, p.value));

  MixedAttentionResult r;
  r.attention_target = scaled_dot_attention(project(target, p.query), keys, values, &r.weights_target);
  r.attention_search = scaled_dot_attention(project(search, p.query), keys, values, &r.weights_search);

  Eigen::MatrixXd out = vstack(r.attention_target, r.attention_search) * p.out_weight;
  out.rowwise() += p.out_bias.row(0);
  r.target = TokenSeq(out.topRows(target.size()), target.rows, target.cols);
  r.search = TokenSeq(out.bottomRows(search.size()), search.rows, search.cols);
  return r;
}

MixedAttentionGradients mixed_attention_backward(const TokenSeq& target, const TokenSeq& search,
                                                 const MamParams& p, const Eigen::MatrixXd& grad_target,
                                                 const Eigen::MatrixXd& grad_search) {
  const MixedAttentionResult fwd = mixed_attention(target, search, p);
  if (grad_target.rows() != target.size() || grad_target.cols() != p.dim() || grad_search.rows() != search.size() ||
      grad_search.cols() != p.dim()) {
    throw ShapeError("upstream gradient shapes do not match the attention outputs");
  }
  const Eigen::Index nt = target.size();
  const Eigen::Index ns = search.size();

  MixedAttentionGradients g{MamParams::zeros_like(p), Eigen::MatrixXd::Zero(nt, p.dim()),
                            Eigen::MatrixXd::Zero(ns, p.dim())};

  const Eigen::MatrixXd grad_out = vstack(grad_target, grad_search);
  const Eigen::MatrixXd attn = vstack(fwd.attention_target, fwd.attention_search);
  g.params.out_weight = attn.transpose() * grad_out;
  g.params.out_bias = grad_out.colwise().sum();
  const Eigen::MatrixXd grad_attn = grad_out * p.out_weight.transpose();

  const Eigen::MatrixXd q_t = project(target, p.query);
  const Eigen::MatrixXd q_s = project(search, p.query);
  const Eigen::MatrixXd keys = vstack(project(target, p.key), project(search, p.key));
  const Eigen::MatrixXd values = vstack(project(target, p.value), project(search, p.value));

  const auto at = scaled_dot_attention_backward(q_t, keys, values, grad_attn.topRows(nt));
  const auto as = scaled_dot_attention_backward(q_s, keys, values, grad_attn.bottomRows(ns));
  const Eigen::MatrixXd grad_keys = at.keys + as.keys;
  const Eigen::MatrixXd grad_values = at.values + as.values;

  projection_backward(target, search, p.query, at.queries, as.queries, g.params.query, g.target, g.search);
  projection_backward(target, search, p.key, grad_keys.topRows(nt), grad_keys.bottomRows(ns), g.params.key, g.target,
                      g.search);
  projection_backward(target, search, p.value, grad_values.topRows(nt), grad_values.bottomRows(ns), g.params.value,
                      g.target, g.search);
  return g;
}

}  // namespace nightbench
