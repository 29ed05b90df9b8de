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

#include "nightbench/losses.hpp"

#include <cmath>

#include "nightbench/error.hpp"

namespace nightbench {

namespace {

void check_label(int y) {
  if (y != 0 && y != 1) throw DomainError("score label must be 0 or 1");
}

void check_probability(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("score must lie strictly inside (0, 1)");
}

bool near(double a, double b, double eps) { return std::fabs(a - b) < eps; }

}  // namespace

std::array<double, 4> box_coordinates(const BoundingBox& b) { return {b.x, b.y, b.w, b.h}; }

BoundingBox box_from_coordinates(const std::array<double, 4>& c) { return {c[0], c[1], c[2], c[3]}; }

double l1_giou_loss(const BoundingBox& pred, const BoundingBox& gt, const LossWeights& w) {
  const double l1 = std::fabs(pred.x - gt.x) + std::fabs(pred.y - gt.y) + std::fabs(pred.w - gt.w) +
                    std::fabs(pred.h - gt.h);
  return w.lambda_l1 * l1 + w.lambda_giou * (1.0 - giou(gt, pred));
}

BoxGradient giou_gradient(const BoundingBox& pred, const BoundingBox& gt) {
  validate_box(pred);
  validate_box(gt);

  // giou = I/U - (C - U)/C = I/U - 1 + U/C, differentiated per edge.
  const double iw_raw = std::min(pred.right(), gt.right()) - std::max(pred.x, gt.x);
  const double ih_raw = std::min(pred.bottom(), gt.bottom()) - std::max(pred.y, gt.y);
  const bool overlap = iw_raw > 0.0 && ih_raw > 0.0;
  const double iw = overlap ? iw_raw : 0.0;
  const double ih = overlap ? ih_raw : 0.0;
  const double inter = iw * ih;
  const double uni = pred.area() + gt.area() - inter;
  const BoundingBox hull = enclosing_box(pred, gt);
  const double cw = hull.w;
  const double ch = hull.h;
  const double c = cw * ch;
  if (!(c > 0.0) || !(uni > 0.0)) throw UndefinedMetricError("GIoU gradient undefined for degenerate boxes");

  // Partials of the scalar pieces with respect to the four pred edges
  // (left, right, top, bottom).
  auto edge_grad = [&](double d_iw_left, double d_iw_right, double d_cw_left, double d_cw_right, double other_i,
                       double other_c, double own_other_extent) {
    // Returns {d/d left, d/d right} for an x-type axis (or y-type).
    std::array<double, 2> out{};
    const double d_inter[2] = {d_iw_left * other_i, d_iw_right * other_i};
    const double d_area[2] = {-own_other_extent, own_other_extent};
    const double d_c[2] = {d_cw_left * other_c, d_cw_right * other_c};
    for (int k = 0; k < 2; ++k) {
      const double d_uni = d_area[k] - d_inter[k];
      out[k] = d_inter[k] / uni - inter * d_uni / (uni * uni) + d_uni / c - uni * d_c[k] / (c * c);
    }
    return out;
  };

  const double d_iw_left = overlap && pred.x > gt.x ? -1.0 : 0.0;
  const double d_iw_right = overlap && pred.right() < gt.right() ? 1.0 : 0.0;
  const double d_cw_left = pred.x < gt.x ? -1.0 : 0.0;
  const double d_cw_right = pred.right() > gt.right() ? 1.0 : 0.0;
  const auto gx = edge_grad(d_iw_left, d_iw_right, d_cw_left, d_cw_right, ih, ch, pred.h);

  const double d_ih_top = overlap && pred.y > gt.y ? -1.0 : 0.0;
  const double d_ih_bottom = overlap && pred.bottom() < gt.bottom() ? 1.0 : 0.0;
  const double d_ch_top = pred.y < gt.y ? -1.0 : 0.0;
  const double d_ch_bottom = pred.bottom() > gt.bottom() ? 1.0 : 0.0;
  const auto gy = edge_grad(d_ih_top, d_ih_bottom, d_ch_top, d_ch_bottom, iw, cw, pred.w);

  // left = x, right = x + w.
  return {gx[0] + gx[1], gy[0] + gy[1], gx[1], gy[1]};
}

BoxGradient l1_giou_loss_gradient(const BoundingBox& pred, const BoundingBox& gt, const LossWeights& w) {
  const auto p = box_coordinates(pred);
  const auto g = box_coordinates(gt);
  const auto dg = giou_gradient(pred, gt);
  BoxGradient out{};
  for (int i = 0; i < 4; ++i) {
    const double sign = p[i] > g[i] ? 1.0 : (p[i] < g[i] ? -1.0 : 0.0);
    out[i] = w.lambda_l1 * sign - w.lambda_giou * dg[i];
  }
  return out;
}

std::array<bool, 4> giou_kinks(const BoundingBox& pred, const BoundingBox& gt, double eps) {
  const auto x_axis = [&](double lo, double hi, double glo, double ghi) {
    const bool left = near(lo, glo, eps) || near(lo, ghi, eps);
    const bool right = near(hi, glo, eps) || near(hi, ghi, eps);
    return std::array<bool, 2>{left || right, right};
  };
  const auto gx = x_axis(pred.x, pred.right(), gt.x, gt.right());
  const auto gy = x_axis(pred.y, pred.bottom(), gt.y, gt.bottom());
  return {gx[0], gy[0], gx[1], gy[1]};
}

std::array<bool, 4> l1_giou_kinks(const BoundingBox& pred, const BoundingBox& gt, double eps) {
  auto kinks = giou_kinks(pred, gt, eps);
  const auto p = box_coordinates(pred);
  const auto g = box_coordinates(gt);
  for (int i = 0; i < 4; ++i) kinks[i] = kinks[i] || near(p[i], g[i], eps);
  return kinks;
}

double score_loss(double p, int y) {
  check_probability(p);
  check_label(y);
  return y == 1 ? -std::log(p) : -std::log1p(-p);
}

double score_loss_derivative(double p, int y) {
  check_probability(p);
  check_label(y);
  return y == 1 ? -1.0 / p : 1.0 / (1.0 - p);
}

}  // namespace nightbench
