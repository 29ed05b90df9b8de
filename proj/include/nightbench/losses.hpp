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

#include <array>

#include "nightbench/box.hpp"

namespace nightbench {

struct LossWeights {
  double lambda_l1 = 5.0;
  double lambda_giou = 2.0;
};

// Gradient with respect to the predicted box, ordered (x, y, w, h).
using BoxGradient = std::array<double, 4>;

std::array<double, 4> box_coordinates(const BoundingBox& b);
BoundingBox box_from_coordinates(const std::array<double, 4>& c);

// lambda_l1 * sum |pred_i - gt_i| over (x, y, w, h) + lambda_giou * (1 - GIoU(gt, pred)).
double l1_giou_loss(const BoundingBox& pred, const BoundingBox& gt, const LossWeights& w = {});
BoxGradient l1_giou_loss_gradient(const BoundingBox& pred, const BoundingBox& gt, const LossWeights& w = {});

// d GIoU(gt, pred) / d pred. One-sided choices at min/max ties.
BoxGradient giou_gradient(const BoundingBox& pred, const BoundingBox& gt);

// Coordinates within eps of a point where the L1 term or one of the GIoU
// min/max switches is non-differentiable.
std::array<bool, 4> l1_giou_kinks(const BoundingBox& pred, const BoundingBox& gt, double eps);
std::array<bool, 4> giou_kinks(const BoundingBox& pred, const BoundingBox& gt, double eps);

// Binary cross-entropy -[y ln p + (1 - y) ln(1 - p)] with y in {0, 1}.
// Throws DomainError unless 0 < p < 1.
double score_loss(double p, int y);
double score_loss_derivative(double p, int y);

}  // namespace nightbench
