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

#include "nightbench/spm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "nightbench/error.hpp"
#include "nightbench/rng.hpp"

namespace nightbench {

namespace {

struct BlockTrace {
  Eigen::MatrixXd query;   // 1 x d
  Eigen::MatrixXd keys;    // n x d
  Eigen::MatrixXd values;  // n x d
  Eigen::MatrixXd attended;  // 1 x d, before the output map
  Eigen::MatrixXd out;     // 1 x d, residual included
};

Eigen::MatrixXd affine(const Eigen::MatrixXd& x, const Eigen::MatrixXd& w, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd y = x * w;
  y.rowwise() += b.row(0);
  return y;
}

BlockTrace block_forward(const Eigen::MatrixXd& z, const Eigen::MatrixXd& x, const ScoreAttentionBlock& b) {
  BlockTrace t;
  t.query = affine(z, b.wq, b.bq);
  t.keys = affine(x, b.wk, b.bk);
  t.values = affine(x, b.wv, b.bv);
  t.attended = scaled_dot_attention(t.query, t.keys, t.values);
  t.out = z + affine(t.attended, b.wo, b.bo);
  return t;
}

// Returns d/dz; accumulates parameter gradients into g.
Eigen::MatrixXd block_backward(const Eigen::MatrixXd& z, const Eigen::MatrixXd& x, const ScoreAttentionBlock& b,
                               const BlockTrace& t, const Eigen::MatrixXd& grad_out, ScoreAttentionBlock& g) {
  g.wo += t.attended.transpose() * grad_out;
  g.bo += grad_out;
  const Eigen::MatrixXd grad_attended = grad_out * b.wo.transpose();
  const auto ag = scaled_dot_attention_backward(t.query, t.keys, t.values, grad_attended);
  g.wq += z.transpose() * ag.queries;
  g.bq += ag.queries;
  g.wk += x.transpose() * ag.keys;
  g.bk += ag.keys.colwise().sum();
  g.wv += x.transpose() * ag.values;
  g.bv += ag.values.colwise().sum();
  return grad_out + ag.queries * b.wq.transpose();
}

Eigen::MatrixXd gelu_matrix(const Eigen::MatrixXd& a) { return a.unaryExpr([](double v) { return gelu(v); }); }

struct SpmTrace {
  BlockTrace search;
  BlockTrace target;
  Eigen::MatrixXd a1, h1, a2, h2;
  double logit = 0.0;
  double score = 0.0;
};

void check_inputs(const SpmParams& p, const TokenSeq& search_roi, const TokenSeq& initial_target) {
  validate(p);
  validate(search_roi);
  validate(initial_target);
  if (search_roi.dim() != p.dim() || initial_target.dim() != p.dim()) {
    throw ShapeError("score head dimension does not match token dimension");
  }
}

SpmTrace spm_forward(const SpmParams& p, const TokenSeq& search_roi, const TokenSeq& initial_target) {
  check_inputs(p, search_roi, initial_target);
  SpmTrace t;
  t.search = block_forward(p.score_token, search_roi.tokens, p.search_block);
  t.target = block_forward(t.search.out, initial_target.tokens, p.target_block);
  t.a1 = affine(t.target.out, p.w1, p.b1);
  t.h1 = gelu_matrix(t.a1);
  t.a2 = affine(t.h1, p.w2, p.b2);
  t.h2 = gelu_matrix(t.a2);
  t.logit = affine(t.h2, p.w3, p.b3)(0, 0);
  // Keep the score strictly inside (0, 1) even when the logistic saturates
  // in double precision, so it is always a valid score_loss input.
  t.score = std::clamp(sigmoid(t.logit), std::numeric_limits<double>::denorm_min(), std::nextafter(1.0, 0.0));
  return t;
}

void check_block(const ScoreAttentionBlock& b, int d) {
  for (const Eigen::MatrixXd* w : {&b.wq, &b.wk, &b.wv, &b.wo}) {
    if (w->rows() != d || w->cols() != d) throw ShapeError("score attention weight must be d x d");
  }
  for (const Eigen::MatrixXd* v : {&b.bq, &b.bk, &b.bv, &b.bo}) {
    if (v->rows() != 1 || v->cols() != d) throw ShapeError("score attention bias must be 1 x d");
  }
}

}  // namespace

double gelu(double x) { return 0.5 * x * (1.0 + std::erf(x / std::numbers::sqrt2)); }

double gelu_derivative(double x) {
  const double cdf = 0.5 * (1.0 + std::erf(x / std::numbers::sqrt2));
  const double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
  return cdf + x * pdf;
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

SpmParams SpmParams::random(int dim, int hidden, std::uint64_t seed, double scale) {
  if (dim < 1 || hidden < 1) throw ShapeError("score head needs positive dimensions");
  SpmParams p;
  p.score_token.resize(1, dim);
  for (ScoreAttentionBlock* b : {&p.search_block, &p.target_block}) {
    for (Eigen::MatrixXd* w : {&b->wq, &b->wk, &b->wv, &b->wo}) w->resize(dim, dim);
    for (Eigen::MatrixXd* v : {&b->bq, &b->bk, &b->bv, &b->bo}) v->resize(1, dim);
  }
  p.w1.resize(dim, hidden);
  p.b1.resize(1, hidden);
  p.w2.resize(hidden, hidden);
  p.b2.resize(1, hidden);
  p.w3.resize(hidden, 1);
  p.b3.resize(1, 1);
  std::uint64_t stream = 0;
  p.for_each_tensor([&](Eigen::MatrixXd& m) {
    m = random_uniform_matrix(static_cast<int>(m.rows()), static_cast<int>(m.cols()), scale,
                              derive_seed(seed, stream++));
  });
  return p;
}

SpmParams SpmParams::zeros_like(const SpmParams& other) {
  SpmParams p = other;
  p.for_each_tensor([](Eigen::MatrixXd& m) { m.setZero(); });
  return p;
}

void validate(const SpmParams& p) {
  const int d = p.dim();
  const int h = p.hidden();
  if (d < 1 || h < 1 || p.score_token.rows() != 1) throw ShapeError("score token must be 1 x d");
  check_block(p.search_block, d);
  check_block(p.target_block, d);
  if (p.w1.rows() != d || p.b1.rows() != 1 || p.b1.cols() != h || p.w2.rows() != h || p.w2.cols() != h ||
      p.b2.rows() != 1 || p.b2.cols() != h || p.w3.rows() != h || p.w3.cols() != 1 || p.b3.rows() != 1 ||
      p.b3.cols() != 1) {
    throw ShapeError("score head perceptron has inconsistent shapes");
  }
  p.for_each_tensor([](const Eigen::MatrixXd& m) {
    if (!m.allFinite()) throw NumericError("score head parameters contain non-finite values");
  });
}

double spm_score(const SpmParams& p, const TokenSeq& search_roi, const TokenSeq& initial_target) {
  return spm_forward(p, search_roi, initial_target).score;
}

SpmParams spm_score_gradient(const SpmParams& p, const TokenSeq& search_roi, const TokenSeq& initial_target) {
  const SpmTrace t = spm_forward(p, search_roi, initial_target);
  SpmParams g = SpmParams::zeros_like(p);

  const double grad_logit = t.score * (1.0 - t.score);
  g.w3 = t.h2.transpose() * grad_logit;
  g.b3(0, 0) = grad_logit;
  const Eigen::MatrixXd grad_h2 = p.w3.transpose() * grad_logit;
  const Eigen::MatrixXd grad_a2 = grad_h2.cwiseProduct(t.a2.unaryExpr([](double v) { return gelu_derivative(v); }));
  g.w2 = t.h1.transpose() * grad_a2;
  g.b2 = grad_a2;
  const Eigen::MatrixXd grad_h1 = grad_a2 * p.w2.transpose();
  const Eigen::MatrixXd grad_a1 = grad_h1.cwiseProduct(t.a1.unaryExpr([](double v) { return gelu_derivative(v); }));
  g.w1 = t.target.out.transpose() * grad_a1;
  g.b1 = grad_a1;
  const Eigen::MatrixXd grad_z2 = grad_a1 * p.w1.transpose();

  const Eigen::MatrixXd grad_z1 =
      block_backward(t.search.out, initial_target.tokens, p.target_block, t.target, grad_z2, g.target_block);
  g.score_token =
      block_backward(p.score_token, search_roi.tokens, p.search_block, t.search, grad_z1, g.search_block);
  return g;
}

TemplateState::TemplateState(TokenSeq initial)
    : initial_(std::make_shared<const TokenSeq>(initial)), online_(std::move(initial)) {
  validate(*initial_);
}

TemplateState update_template(const TemplateState& state, TokenSeq candidate, double confidence) {
  if (!(confidence >= 0.0 && confidence <= 1.0)) {
    throw ParameterError("template confidence must lie in [0, 1]");
  }
  if (confidence < kTemplateAcceptThreshold) return state;
  validate(candidate);
  TemplateState next = state;
  next.online_ = std::move(candidate);
  next.last_confidence_ = confidence;
  return next;
}

}  // namespace nightbench
