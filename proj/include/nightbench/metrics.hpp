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

#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "nightbench/box.hpp"

namespace nightbench {

// One annotated frame. An empty prediction is a tracker failure: it scores
// IoU 0 and an infinite center distance.
struct FramePair {
  BoundingBox gt;
  std::optional<BoundingBox> pred;
};

struct TrackRun {
  std::string sequence_id;
  std::vector<FramePair> frames;
};

struct CurvePoint {
  double threshold = 0.0;
  double fraction = 0.0;
};
using Curve = std::vector<CurvePoint>;

struct EvalOptions {
  double d_px = 20.0;
  double d_norm = 0.5;
  int curve_resolution = 101;
  // Upper ends of the threshold ranges sampled for the two precision curves.
  double precision_curve_max = 50.0;
  double norm_precision_curve_max = 0.5;
};

// All scalar metrics in percent [0, 100]; curve fractions in [0, 1].
struct MetricsReport {
  double auc = 0.0;
  double op50 = 0.0;
  double op75 = 0.0;
  double precision = 0.0;
  double norm_precision = 0.0;
  double d_px = 20.0;
  double d_norm = 0.5;
  std::size_t frames = 0;
  Curve success_curve;
  Curve precision_curve;
  Curve norm_precision_curve;
};

// Per-frame quantities. Errors name the offending frame index.
std::vector<double> frame_ious(const TrackRun& run);
std::vector<double> frame_center_distances(const TrackRun& run);
std::vector<double> frame_normalized_distances(const TrackRun& run);

// n evenly spaced values from lo to hi inclusive (n >= 2).
std::vector<double> linspace(double lo, double hi, int n);

// Fraction of frames with IoU >= t for each t.
Curve success_curve(const TrackRun& run, std::span<const double> thresholds);
// Fraction of frames with center distance <= d for each d.
Curve precision_curve(const TrackRun& run, std::span<const double> thresholds);
Curve norm_precision_curve(const TrackRun& run, std::span<const double> thresholds);

// Closed form: the area under the success curve over t in [0,1] equals mean
// per-frame IoU. Returned in percent.
double auc(const TrackRun& run);

// Trapezoidal integration of the success curve sampled at n thresholds.
double auc_quadrature(const TrackRun& run, int n_thresholds);

double overlap_precision(const TrackRun& run, double t);
double precision_at(const TrackRun& run, double d_px);
double norm_precision_at(const TrackRun& run, double d_norm);

MetricsReport evaluate_run(const TrackRun& run, const EvalOptions& options = {});

// Frame-pooled concatenation of several runs, in the order given.
TrackRun pool_runs(std::span<const TrackRun> runs, std::string sequence_id);

nlohmann::ordered_json to_json(const MetricsReport& report);
MetricsReport report_from_json(const nlohmann::ordered_json& j);

// Table rows shaped `<key>,auc,op50,op75,precision,norm_precision`.
struct MetricsRow {
  std::string label;
  MetricsReport report;
};
void write_metrics_csv(std::ostream& out, std::string_view key_column, std::span<const MetricsRow> rows);
std::string format_metric(double value);

}  // namespace nightbench
