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

#include "nightbench/grad_check.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "nightbench/error.hpp"
#include "nightbench/rng.hpp"

namespace nightbench {

namespace {

void append(std::vector<double>& out, const Eigen::MatrixXd& m) { out.insert(out.end(), m.data(), m.data() + m.size()); }

void read_into(std::span<const double> values, std::size_t& offset, Eigen::MatrixXd& m) {
  std::copy(values.begin() + static_cast<std::ptrdiff_t>(offset),
            values.begin() + static_cast<std::ptrdiff_t>(offset + m.size()), m.data());
  offset += static_cast<std::size_t>(m.size());
}

}  // namespace

std::string GradCheckReport::summary() const {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "checked=%zu skipped=%zu max_rel_err=%.3e (index %zu: analytic %.6e numeric %.6e) %s",
                checked, skipped.size(), max_relative_error, worst_index, worst_analytic, worst_numeric,
                passed() ? "ok" : "FAIL");
  return buf;
}

GradCheckReport grad_check(const ScalarFunction& f, std::span<const double> point, std::span<const double> analytic,
                           const GradCheckOptions& options, const std::function<bool(std::size_t)>& skip) {
  if (!(options.epsilon > 0.0)) throw ParameterError("grad_check epsilon must be > 0");
  if (point.size() != analytic.size()) throw ShapeError("analytic gradient length does not match the point");

  GradCheckReport report;
  report.tolerance = options.tolerance;
  std::vector<double> x(point.begin(), point.end());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (skip && skip(i)) {
      report.skipped.push_back(i);
      continue;
    }
    const double saved = x[i];
    x[i] = saved + options.epsilon;
    const double up = f(x);
    x[i] = saved - options.epsilon;
    const double down = f(x);
    x[i] = saved;

    const double numeric = (up - down) / (2.0 * options.epsilon);
    const double denom = std::max({std::fabs(analytic[i]), std::fabs(numeric), options.denominator_floor});
    const double rel = std::fabs(analytic[i] - numeric) / denom;
    ++report.checked;
    if (report.checked == 1 || rel > report.max_relative_error) {
      report.max_relative_error = rel;
      report.worst_index = i;
      report.worst_analytic = analytic[i];
      report.worst_numeric = numeric;
    }
  }
  return report;
}

GradCheckReport check_mixed_attention_gradients(const TokenSeq& target, const TokenSeq& search, const MamParams& p,
                                                std::uint64_t seed, const GradCheckOptions& options) {
  const Eigen::MatrixXd g_t = random_uniform_matrix(target.size(), p.dim(), 1.0, derive_seed(seed, 0));
  const Eigen::MatrixXd g_s = random_uniform_matrix(search.size(), p.dim(), 1.0, derive_seed(seed, 1));

  // Point layout: parameters, then target tokens, then search tokens.
  std::vector<double> point = flatten_params(p);
  const std::size_t n_params = point.size();
  append(point, target.tokens);
  append(point, search.tokens);

  const auto grads = mixed_attention_backward(target, search, p, g_t, g_s);
  std::vector<double> analytic = flatten_params(grads.params);
  append(analytic, grads.target);
  append(analytic, grads.search);

  const ScalarFunction f = [&](std::span<const double> x) {
    MamParams q = p;
    unflatten_params(x.first(n_params), q);
    TokenSeq t = target;
    TokenSeq s = search;
    std::size_t offset = n_params;
    read_into(x, offset, t.tokens);
    read_into(x, offset, s.tokens);
    const auto r = mixed_attention(t, s, q);
    return r.target.tokens.cwiseProduct(g_t).sum() + r.search.tokens.cwiseProduct(g_s).sum();
  };
  return grad_check(f, point, analytic, options);
}

GradCheckReport check_spm_gradients(const SpmParams& p, const TokenSeq& search_roi, const TokenSeq& initial_target,
                                    const GradCheckOptions& options) {
  const std::vector<double> point = flatten_params(p);
  const std::vector<double> analytic = flatten_params(spm_score_gradient(p, search_roi, initial_target));
  const ScalarFunction f = [&](std::span<const double> x) {
    SpmParams q = p;
    unflatten_params(x, q);
    return spm_score(q, search_roi, initial_target);
  };
  return grad_check(f, point, analytic, options);
}

GradCheckReport check_l1_giou_gradients(const BoundingBox& pred, const BoundingBox& gt, const LossWeights& w,
                                        const GradCheckOptions& options) {
  const auto point = box_coordinates(pred);
  const auto analytic = l1_giou_loss_gradient(pred, gt, w);
  const auto kinks = l1_giou_kinks(pred, gt, options.epsilon);
  const ScalarFunction f = [&](std::span<const double> x) {
    return l1_giou_loss(box_from_coordinates({x[0], x[1], x[2], x[3]}), gt, w);
  };
  return grad_check(f, point, analytic, options, [&](std::size_t i) { return kinks[i]; });
}

GradCheckReport check_giou_gradients(const BoundingBox& pred, const BoundingBox& gt, const GradCheckOptions& options) {
  const auto point = box_coordinates(pred);
  const auto analytic = giou_gradient(pred, gt);
  const auto kinks = giou_kinks(pred, gt, options.epsilon);
  const ScalarFunction f = [&](std::span<const double> x) {
    return giou(gt, box_from_coordinates({x[0], x[1], x[2], x[3]}));
  };
  return grad_check(f, point, analytic, options, [&](std::size_t i) { return kinks[i]; });
}

GradCheckReport check_score_loss_gradient(double p, int y, const GradCheckOptions& options) {
  const std::array<double, 1> point{p};
  const std::array<double, 1> analytic{score_loss_derivative(p, y)};
  const ScalarFunction f = [&](std::span<const double> x) { return score_loss(x[0], y); };
  return grad_check(f, point, analytic, options);
}

}  // namespace nightbench
