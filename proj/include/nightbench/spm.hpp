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
#include <memory>
#include <optional>

#include "nightbench/tokens.hpp"

namespace nightbench {

// Single-query attention block with a residual connection:
//   z' = z + softmax((z Wq + bq)(X Wk + bk)^T / sqrt(d)) (X Wv + bv) Wo + bo
struct ScoreAttentionBlock {
  Eigen::MatrixXd wq, bq;
  Eigen::MatrixXd wk, bk;
  Eigen::MatrixXd wv, bv;
  Eigen::MatrixXd wo, bo;
};

/// Score prediction head. A learnable score token attends to the search ROI
/// tokens, then to the initial target tokens; a three-layer perceptron with
/// GELU hidden activations and a sigmoid maps the result to a confidence.
struct SpmParams {
  Eigen::MatrixXd score_token;  // 1 x d
  ScoreAttentionBlock search_block;
  ScoreAttentionBlock target_block;
  Eigen::MatrixXd w1, b1;  // d x h, 1 x h
  Eigen::MatrixXd w2, b2;  // h x h, 1 x h
  Eigen::MatrixXd w3, b3;  // h x 1, 1 x 1

  int dim() const { return static_cast<int>(score_token.cols()); }
  int hidden() const { return static_cast<int>(w1.cols()); }

  static SpmParams random(int dim, int hidden, std::uint64_t seed, double scale = 0.1);
  static SpmParams zeros_like(const SpmParams& other);

  template <typename Fn>
  void for_each_tensor(Fn&& fn) {
    fn(score_token);
    for (ScoreAttentionBlock* b : {&search_block, &target_block}) {
      for (Eigen::MatrixXd* m : {&b->wq, &b->bq, &b->wk, &b->bk, &b->wv, &b->bv, &b->wo, &b->bo}) fn(*m);
    }
    for (Eigen::MatrixXd* m : {&w1, &b1, &w2, &b2, &w3, &b3}) fn(*m);
  }
  template <typename Fn>
  void for_each_tensor(Fn&& fn) const {
    fn(score_token);
    for (const ScoreAttentionBlock* b : {&search_block, &target_block}) {
      for (const Eigen::MatrixXd* m : {&b->wq, &b->bq, &b->wk, &b->bk, &b->wv, &b->bv, &b->wo, &b->bo}) fn(*m);
    }
    for (const Eigen::MatrixXd* m : {&w1, &b1, &w2, &b2, &w3, &b3}) fn(*m);
  }
};

void validate(const SpmParams& p);

double gelu(double x);
double gelu_derivative(double x);
double sigmoid(double x);

// Confidence in (0, 1).
double spm_score(const SpmParams& p, const TokenSeq& search_roi, const TokenSeq& initial_target);

// d spm_score / d params, in the same layout as the parameters.
SpmParams spm_score_gradient(const SpmParams& p, const TokenSeq& search_roi, const TokenSeq& initial_target);

inline constexpr double kTemplateAcceptThreshold = 0.5;

// Initial template (fixed for the whole sequence) plus the current online
// template. Copies share the immutable initial template.
class TemplateState {
 public:
  explicit TemplateState(TokenSeq initial);

  const TokenSeq& initial() const { return *initial_; }
  const TokenSeq& online() const { return online_; }
  std::optional<double> last_confidence() const { return last_confidence_; }

 private:
  friend TemplateState update_template(const TemplateState& state, TokenSeq candidate, double confidence);

  std::shared_ptr<const TokenSeq> initial_;
  TokenSeq online_;
  std::optional<double> last_confidence_;
};

// A candidate scoring below 0.5 is rejected and the state returned as is;
// otherwise it becomes the online template. Confidence must lie in [0, 1].
TemplateState update_template(const TemplateState& state, TokenSeq candidate, double confidence);

}  // namespace nightbench
