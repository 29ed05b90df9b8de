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

#include "nightbench/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "nightbench/error.hpp"

namespace nightbench {

namespace {

void require_frames(const TrackRun& run) {
  if (run.frames.empty()) {
    throw ParameterError("track run '" + run.sequence_id + "' has no frames");
  }
}

std::string frame_context(const TrackRun& run, std::size_t i) {
  return "sequence '" + run.sequence_id + "' frame " + std::to_string(i) + ": ";
}

template <typename Pred>
double fraction_where(std::span<const double> values, Pred pred) {
  const auto hits = std::count_if(values.begin(), values.end(), pred);
  return static_cast<double>(hits) / static_cast<double>(values.size());
}

Curve curve_ge(std::span<const double> values, std::span<const double> thresholds) {
  Curve curve;
  curve.reserve(thresholds.size());
  for (double t : thresholds) {
    curve.push_back({t, fraction_where(values, [t](double v) { return v >= t; })});
  }
  return curve;
}

Curve curve_le(std::span<const double> values, std::span<const double> thresholds) {
  Curve curve;
  curve.reserve(thresholds.size());
  for (double d : thresholds) {
    curve.push_back({d, fraction_where(values, [d](double v) { return v <= d; })});
  }
  return curve;
}

nlohmann::ordered_json curve_json(const Curve& curve) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& p : curve) arr.push_back({p.threshold, p.fraction});
  return arr;
}

Curve curve_from_json(const nlohmann::ordered_json& j) {
  Curve curve;
  for (const auto& p : j) curve.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  return curve;
}

}  // namespace

std::vector<double> frame_ious(const TrackRun& run) {
  std::vector<double> out(run.frames.size(), 0.0);
  for (std::size_t i = 0; i < run.frames.size(); ++i) {
    const auto& f = run.frames[i];
    if (!f.pred) continue;
    try {
      out[i] = iou(f.gt, *f.pred);
    } catch (const UndefinedMetricError& e) {
      throw UndefinedMetricError(frame_context(run, i) + e.what());
    }
  }
  return out;
}

std::vector<double> frame_center_distances(const TrackRun& run) {
  std::vector<double> out(run.frames.size(), std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < run.frames.size(); ++i) {
    const auto& f = run.frames[i];
    if (f.pred) out[i] = center_distance(f.gt, *f.pred);
  }
  return out;
}

std::vector<double> frame_normalized_distances(const TrackRun& run) {
  std::vector<double> out(run.frames.size(), std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < run.frames.size(); ++i) {
    const auto& f = run.frames[i];
    if (!(std::hypot(f.gt.w, f.gt.h) > 0.0)) {
      throw UndefinedMetricError(frame_context(run, i) + "ground-truth box has zero diagonal");
    }
    if (f.pred) out[i] = normalized_distance(f.gt, *f.pred);
  }
  return out;
}

std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 2) throw ParameterError("linspace needs at least two samples");
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  out.back() = hi;
  return out;
}

Curve success_curve(const TrackRun& run, std::span<const double> thresholds) {
  require_frames(run);
  return curve_ge(frame_ious(run), thresholds);
}

Curve precision_curve(const TrackRun& run, std::span<const double> thresholds) {
  require_frames(run);
  return curve_le(frame_center_distances(run), thresholds);
}

Curve norm_precision_curve(const TrackRun& run, std::span<const double> thresholds) {
  require_frames(run);
  return curve_le(frame_normalized_distances(run), thresholds);
}

double auc(const TrackRun& run) {
  require_frames(run);
  const auto ious = frame_ious(run);
  return 100.0 * std::accumulate(ious.begin(), ious.end(), 0.0) / static_cast<double>(ious.size());
}

double auc_quadrature(const TrackRun& run, int n_thresholds) {
  const auto thresholds = linspace(0.0, 1.0, n_thresholds);
  const Curve curve = success_curve(run, thresholds);
  double area = 0.0;
  for (std::size_t i = 1; i < curve.size(); ++i) {
    area += 0.5 * (curve[i].fraction + curve[i - 1].fraction) * (curve[i].threshold - curve[i - 1].threshold);
  }
  return 100.0 * area;
}

double overlap_precision(const TrackRun& run, double t) {
  require_frames(run);
  const auto ious = frame_ious(run);
  return 100.0 * fraction_where(ious, [t](double v) { return v >= t; });
}

double precision_at(const TrackRun& run, double d_px) {
  if (!(d_px >= 0.0)) throw ParameterError("precision threshold must be >= 0");
  require_frames(run);
  const auto dist = frame_center_distances(run);
  return 100.0 * fraction_where(dist, [d_px](double v) { return v <= d_px; });
}

double norm_precision_at(const TrackRun& run, double d_norm) {
  if (!(d_norm >= 0.0)) throw ParameterError("normalized precision threshold must be >= 0");
  require_frames(run);
  const auto dist = frame_normalized_distances(run);
  return 100.0 * fraction_where(dist, [d_norm](double v) { return v <= d_norm; });
}

MetricsReport evaluate_run(const TrackRun& run, const EvalOptions& options) {
  require_frames(run);
  if (!(options.d_px >= 0.0) || !(options.d_norm >= 0.0)) {
    throw ParameterError("distance thresholds must be >= 0");
  }
  const auto ious = frame_ious(run);
  const auto dist = frame_center_distances(run);
  const auto ndist = frame_normalized_distances(run);

  MetricsReport r;
  r.frames = run.frames.size();
  r.d_px = options.d_px;
  r.d_norm = options.d_norm;
  r.auc = 100.0 * std::accumulate(ious.begin(), ious.end(), 0.0) / static_cast<double>(ious.size());
  r.op50 = 100.0 * fraction_where(ious, [](double v) { return v >= 0.5; });
  r.op75 = 100.0 * fraction_where(ious, [](double v) { return v >= 0.75; });
  r.precision = 100.0 * fraction_where(dist, [&](double v) { return v <= options.d_px; });
  r.norm_precision = 100.0 * fraction_where(ndist, [&](double v) { return v <= options.d_norm; });

  r.success_curve = curve_ge(ious, linspace(0.0, 1.0, options.curve_resolution));
  r.precision_curve = curve_le(dist, linspace(0.0, options.precision_curve_max, options.curve_resolution));
  r.norm_precision_curve =
      curve_le(ndist, linspace(0.0, options.norm_precision_curve_max, options.curve_resolution));
  return r;
}

TrackRun pool_runs(std::span<const TrackRun> runs, std::string sequence_id) {
  TrackRun pooled{std::move(sequence_id), {}};
  for (const auto& run : runs) {
    pooled.frames.insert(pooled.frames.end(), run.frames.begin(), run.frames.end());
  }
  return pooled;
}

nlohmann::ordered_json to_json(const MetricsReport& r) {
  nlohmann::ordered_json j;
  j["auc"] = r.auc;
  j["op50"] = r.op50;
  j["op75"] = r.op75;
  j["precision"] = r.precision;
  j["norm_precision"] = r.norm_precision;
  j["d_px"] = r.d_px;
  j["d_norm"] = r.d_norm;
  j["frames"] = r.frames;
  j["success_curve"] = curve_json(r.success_curve);
  j["precision_curve"] = curve_json(r.precision_curve);
  j["norm_precision_curve"] = curve_json(r.norm_precision_curve);
  return j;
}

MetricsReport report_from_json(const nlohmann::ordered_json& j) {
  MetricsReport r;
  try {
    r.auc = j.at("auc").get<double>();
    r.op50 = j.at("op50").get<double>();
    r.op75 = j.at("op75").get<double>();
    r.precision = j.at("precision").get<double>();
    r.norm_precision = j.at("norm_precision").get<double>();
    r.d_px = j.value("d_px", 20.0);
    r.d_norm = j.value("d_norm", 0.5);
    r.frames = j.value("frames", std::size_t{0});
    if (j.contains("success_curve")) r.success_curve = curve_from_json(j["success_curve"]);
    if (j.contains("precision_curve")) r.precision_curve = curve_from_json(j["precision_curve"]);
    if (j.contains("norm_precision_curve")) r.norm_precision_curve = curve_from_json(j["norm_precision_curve"]);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed metrics report: ") + e.what());
  }
  return r;
}

std::string format_metric(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", value);
  return buf;
}

void write_metrics_csv(std::ostream& out, std::string_view key_column, std::span<const MetricsRow> rows) {
  out << key_column << ",auc,op50,op75,precision,norm_precision\n";
  for (const auto& row : rows) {
    const auto& r = row.report;
    out << row.label << ',' << format_metric(r.auc) << ',' << format_metric(r.op50) << ','
        << format_metric(r.op75) << ',' << format_metric(r.precision) << ',' << format_metric(r.norm_precision)
        << '\n';
  }
}

}  // namespace nightbench
