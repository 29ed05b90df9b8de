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

#include "nightbench/box.hpp"

#include <algorithm>
#include <cmath>

#include "nightbench/error.hpp"

namespace nightbench {

void validate_box(const BoundingBox& box) {
  if (!std::isfinite(box.x) || !std::isfinite(box.y) || !std::isfinite(box.w) || !std::isfinite(box.h)) {
    throw ParameterError("bounding box has non-finite coordinates");
  }
  if (box.w < 0.0 || box.h < 0.0) {
    throw ParameterError("bounding box has negative extent");
  }
}

namespace {

// Area from the edges, so a box compared with itself gives inter == union
// bit for bit.
double edge_area(const BoundingBox& b) { return (b.right() - b.x) * (b.bottom() - b.y); }

}  // namespace

double intersection_area(const BoundingBox& a, const BoundingBox& b) {
  const double iw = std::min(a.right(), b.right()) - std::max(a.x, b.x);
  const double ih = std::min(a.bottom(), b.bottom()) - std::max(a.y, b.y);
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  return iw * ih;
}

BoundingBox enclosing_box(const BoundingBox& a, const BoundingBox& b) {
  const double x0 = std::min(a.x, b.x);
  const double y0 = std::min(a.y, b.y);
  return {x0, y0, std::max(a.right(), b.right()) - x0, std::max(a.bottom(), b.bottom()) - y0};
}

double iou(const BoundingBox& a, const BoundingBox& b) {
  validate_box(a);
  validate_box(b);
  const double inter = intersection_area(a, b);
  const double uni = edge_area(a) + edge_area(b) - inter;
  if (!(uni > 0.0)) {
    throw UndefinedMetricError("IoU undefined: both boxes have zero area");
  }
  return std::clamp(inter / uni, 0.0, 1.0);
}

double giou(const BoundingBox& a, const BoundingBox& b) {
  validate_box(a);
  validate_box(b);
  const double hull = enclosing_box(a, b).area();
  if (!(hull > 0.0)) {
    throw UndefinedMetricError("GIoU undefined: enclosing box has zero area");
  }
  const double inter = intersection_area(a, b);
  const double uni = edge_area(a) + edge_area(b) - inter;
  const double overlap = uni > 0.0 ? inter / uni : 0.0;
  return overlap - (hull - uni) / hull;
}

double center_distance(const BoundingBox& a, const BoundingBox& b) {
  return std::hypot(a.center_x() - b.center_x(), a.center_y() - b.center_y());
}

double normalized_distance(const BoundingBox& gt, const BoundingBox& pred) {
  const double diagonal = std::hypot(gt.w, gt.h);
  if (!(diagonal > 0.0)) {
    throw UndefinedMetricError("normalized distance undefined: ground-truth box has zero diagonal");
  }
  return center_distance(gt, pred) / diagonal;
}

}  // namespace nightbench
