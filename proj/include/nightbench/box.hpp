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

namespace nightbench {

// Axis-aligned box: top-left corner (x, y) and extents (w, h) in pixels.
struct BoundingBox {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  double right() const { return x + w; }
  double bottom() const { return y + h; }
  double area() const { return w * h; }
  double center_x() const { return x + 0.5 * w; }
  double center_y() const { return y + 0.5 * h; }
  bool degenerate() const { return !(w > 0.0 && h > 0.0); }

  bool operator==(const BoundingBox&) const = default;
};

// Throws ParameterError for negative or non-finite extents.
void validate_box(const BoundingBox& box);

double intersection_area(const BoundingBox& a, const BoundingBox& b);
BoundingBox enclosing_box(const BoundingBox& a, const BoundingBox& b);

// |A n B| / |A u B|. Throws UndefinedMetricError when the union is empty.
double iou(const BoundingBox& a, const BoundingBox& b);

// IoU minus the fraction of the enclosing hull not covered by the union.
// Throws UndefinedMetricError when the hull has zero area.
double giou(const BoundingBox& a, const BoundingBox& b);

double center_distance(const BoundingBox& a, const BoundingBox& b);

// center_distance divided by the ground-truth diagonal.
double normalized_distance(const BoundingBox& gt, const BoundingBox& pred);

}  // namespace nightbench
