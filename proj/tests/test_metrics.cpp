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

#include <cmath>
#include <limits>
#include <sstream>

#include "doctest.h"
#include "nightbench/box.hpp"
#include "nightbench/error.hpp"
#include "nightbench/metrics.hpp"
#include "nightbench/rng.hpp"
#include "support.hpp"

using namespace nightbench;
using namespace nightbench::testing;
using doctest::Approx;

namespace {

// Counts unit cells covered by integer-grid boxes.
double pixel_iou(const BoundingBox& a, const BoundingBox& b) {
  int inter = 0, uni = 0;
  for (int y = 0; y < 20; ++y) {
    for (int x = 0; x < 20; ++x) {
      const bool in_a = x >= a.x && x < a.right() && y >= a.y && y < a.bottom();
      const bool in_b = x >= b.x && x < b.right() && y >= b.y && y < b.bottom();
      inter += in_a && in_b;
      uni += in_a || in_b;
    }
  }
  return double(inter) / double(uni);
}

BoundingBox random_grid_box(Rng& rng) {
  const int x0 = int(rng.next_u64() % 8), y0 = int(rng.next_u64() % 8);
  const int x1 = x0 + 1 + int(rng.next_u64() % (8 - x0)), y1 = y0 + 1 + int(rng.next_u64() % (8 - y0));
  return {double(x0), double(y0), double(x1 - x0), double(y1 - y0)};
}

BoundingBox random_box(Rng& rng) {
  return {rng.uniform(-20, 20), rng.uniform(-20, 20), rng.uniform(0.5, 15), rng.uniform(0.5, 15)};
}

TrackRun random_run(Rng& rng, int frames) {
  TrackRun run{"r", {}};
  for (int i = 0; i < frames; ++i) {
    const BoundingBox gt{rng.uniform(0, 50), rng.uniform(0, 50), rng.uniform(5, 30), rng.uniform(5, 30)};
    BoundingBox pred{gt.x + rng.uniform(-10, 10), gt.y + rng.uniform(-10, 10), gt.w * rng.uniform(0.5, 1.5),
                     gt.h * rng.uniform(0.5, 1.5)};
    run.frames.push_back({gt, rng.uniform() < 0.1 ? std::optional<BoundingBox>{} : pred});
  }
  return run;
}

TrackRun run_with_distances(const std::vector<double>& dists) {
  TrackRun run{"d", {}};
  for (double d : dists) run.frames.push_back({{0, 0, 10, 10}, BoundingBox{d, 0, 10, 10}});
  return run;
}

}  // namespace

TEST_SUITE("boxes") {
  TEST_CASE("iou examples") {
    CHECK(iou({0, 0, 2, 2}, {0, 0, 2, 2}) == 1.0);
    CHECK(iou({0, 0, 1, 1}, {5, 5, 1, 1}) == 0.0);
    CHECK(iou({0, 0, 2, 2}, {1, 1, 2, 2}) == Approx(1.0 / 7.0).epsilon(1e-15));
  }

  TEST_CASE("iou of two empty boxes is undefined") {
    CHECK_THROWS_AS(iou({0, 0, 0, 0}, {1, 1, 0, 0}), UndefinedMetricError);
    CHECK(iou({0, 0, 0, 0}, {0, 0, 1, 1}) == 0.0);
  }

  TEST_CASE("giou examples") {
    CHECK(giou({0, 0, 2, 2}, {0, 0, 2, 2}) == 1.0);
    CHECK(giou({0, 0, 1, 1}, {2, 0, 1, 1}) == Approx(-1.0 / 3.0).epsilon(1e-15));
    CHECK(giou({0, 0, 2, 2}, {1, 1, 2, 2}) == Approx(-5.0 / 63.0).epsilon(1e-15));
    CHECK(1.0 / 7.0 - 2.0 / 9.0 == Approx(-5.0 / 63.0));
  }

  TEST_CASE("giou with an empty hull is undefined") {
    CHECK_THROWS_AS(giou({1, 1, 0, 0}, {1, 1, 0, 0}), UndefinedMetricError);
  }

  TEST_CASE("negative extents are rejected") {
    CHECK_THROWS_AS(validate_box({0, 0, -1, 1}), ParameterError);
    CHECK_THROWS_AS(iou({0, 0, -1, 1}, {0, 0, 1, 1}), ParameterError);
  }

  TEST_CASE("center distances") {
    CHECK(center_distance({0, 0, 2, 2}, {0, 0, 2, 2}) == 0.0);
    CHECK(center_distance({0, 0, 2, 2}, {3, 4, 2, 2}) == Approx(5.0));
    CHECK(center_distance({0, 0, 2, 2}, {0, 2, 2, 2}) == Approx(2.0));
  }

  TEST_CASE("normalized distances") {
    CHECK(normalized_distance({0, 0, 3, 4}, {3, 4, 3, 4}) == Approx(1.0));
    CHECK(normalized_distance({0, 0, 3, 4}, {0, 0, 3, 4}) == 0.0);
    CHECK(normalized_distance({0, 0, 3, 4}, {5, 0, 3, 4}) == Approx(1.0));
    CHECK_THROWS_AS(normalized_distance({0, 0, 0, 0}, {1, 1, 1, 1}), UndefinedMetricError);
  }

  TEST_CASE("iou matches pixel enumeration exactly on the integer grid") {
    Rng rng(31);
    for (int i = 0; i < 2000; ++i) {
      const BoundingBox a = random_grid_box(rng), b = random_grid_box(rng);
      CHECK(iou(a, b) == pixel_iou(a, b));
    }
  }

  TEST_CASE("giou bounds, symmetry and invariances") {
    Rng rng(32);
    for (int i = 0; i < 500; ++i) {
      const BoundingBox a = random_box(rng), b = random_box(rng);
      const double g = giou(a, b), u = iou(a, b);
      CHECK(g <= u + 1e-15);
      CHECK(g > -1.0);
      CHECK(g == Approx(giou(b, a)).epsilon(1e-12));
      CHECK(u == Approx(iou(b, a)).epsilon(1e-12));
      const double tx = rng.uniform(-30, 30), ty = rng.uniform(-30, 30), s = rng.uniform(0.2, 5);
      const BoundingBox at{a.x + tx, a.y + ty, a.w, a.h}, bt{b.x + tx, b.y + ty, b.w, b.h};
      CHECK(giou(at, bt) == Approx(g).epsilon(1e-9));
      CHECK(iou(at, bt) == Approx(u).epsilon(1e-9));
      const BoundingBox as{a.x * s, a.y * s, a.w * s, a.h * s}, bs{b.x * s, b.y * s, b.w * s, b.h * s};
      CHECK(giou(as, bs) == Approx(g).epsilon(1e-9));
      CHECK(iou(as, bs) == Approx(u).epsilon(1e-9));
    }
  }

  TEST_CASE("giou equals iou exactly when the hull is the union") {
    // Nested boxes: hull equals the outer box, which is the union.
    CHECK(giou({0, 0, 4, 4}, {1, 1, 2, 2}) == iou({0, 0, 4, 4}, {1, 1, 2, 2}));
    // Side by side sharing an edge and a full side: hull == union.
    CHECK(giou({0, 0, 2, 2}, {2, 0, 2, 2}) == iou({0, 0, 2, 2}, {2, 0, 2, 2}));
    CHECK(giou({0, 0, 2, 2}, {1, 1, 2, 2}) < iou({0, 0, 2, 2}, {1, 1, 2, 2}));
  }
}

TEST_SUITE("run metrics") {
  TEST_CASE("success curve examples") {
    const std::vector<double> t{0.0, 0.5, 1.0};
    const Curve perfect = success_curve(run_with_ious({1, 1, 1}), t);
    for (const auto& p : perfect) CHECK(p.fraction == 1.0);
    const Curve two = success_curve(run_with_ious({0.2, 0.8}), t);
    CHECK(two[0].fraction == 1.0);
    CHECK(two[1].fraction == Approx(0.5));
  }

  TEST_CASE("auc examples") {
    CHECK(auc(run_with_ious({1, 1, 1})) == 100.0);
    CHECK(auc(run_with_ious({0.2, 0.8})) == Approx(50.0).epsilon(1e-12));
    TrackRun one{"s", {{{0, 0, 2, 2}, BoundingBox{1, 1, 2, 2}}}};
    CHECK(auc(one) == Approx(100.0 / 7.0).epsilon(1e-12));
    CHECK(auc(one) == Approx(14.2857).epsilon(1e-6));
  }

  TEST_CASE("overlap precision examples") {
    const TrackRun run = run_with_ious({0.4, 0.6, 0.8});
    CHECK(overlap_precision(run, 0.5) == Approx(200.0 / 3.0));
    CHECK(overlap_precision(run, 0.75) == Approx(100.0 / 3.0));
    CHECK(overlap_precision(run_with_ious({1, 1}), 0.9) == 100.0);
    TrackRun exact{"e", {{{0, 0, 4, 1}, BoundingBox{0, 0, 2, 1}}}};  // IoU exactly 0.5
    CHECK(overlap_precision(exact, 0.5) == 100.0);
  }

  TEST_CASE("precision examples") {
    const TrackRun run = run_with_distances({0, 10, 30});
    CHECK(precision_at(run, 20) == Approx(200.0 / 3.0));
    CHECK(precision_at(run_with_distances({0, 0}), 0) == 100.0);
    CHECK(precision_at(run, 1e9) == 100.0);
    CHECK(precision_at(run_with_distances({0, 10}), 10) == 100.0);
  }

  TEST_CASE("normalized precision examples") {
    CHECK(norm_precision_at(run_with_distances({0, 0}), 0.0) == 100.0);
    const double diag = std::sqrt(200.0);
    const TrackRun run = run_with_distances({0.1 * diag, 0.4 * diag, 0.9 * diag});
    CHECK(norm_precision_at(run, 0.5) == Approx(200.0 / 3.0));
    CHECK(norm_precision_at(run_with_distances({0, 3}), 0.0) == 50.0);
  }

  TEST_CASE("zero-diagonal ground truth names the frame") {
    TrackRun run{"seqz", {{{0, 0, 1, 1}, BoundingBox{0, 0, 1, 1}}, {{5, 5, 0, 0}, BoundingBox{5, 5, 1, 1}}}};
    CHECK_THROWS_WITH_AS(norm_precision_at(run, 0.5), doctest::Contains("frame 1"), UndefinedMetricError);
  }

  TEST_CASE("missing predictions score zero overlap and infinite distance") {
    TrackRun run{"m", {{{0, 0, 10, 10}, BoundingBox{0, 0, 10, 10}}, {{0, 0, 10, 10}, std::nullopt}}};
    CHECK(auc(run) == Approx(50.0));
    CHECK(precision_at(run, 1e300) == 50.0);
    CHECK(norm_precision_at(run, 1e300) == 50.0);
    CHECK(frame_center_distances(run)[1] == std::numeric_limits<double>::infinity());
  }

  TEST_CASE("evaluate_run on perfect and constant runs") {
    const MetricsReport perfect = evaluate_run(run_with_ious({1, 1, 1, 1}));
    CHECK(perfect.auc == 100.0);
    CHECK(perfect.op50 == 100.0);
    CHECK(perfect.op75 == 100.0);
    CHECK(perfect.precision == 100.0);
    CHECK(perfect.norm_precision == 100.0);

    const MetricsReport constant = evaluate_run(run_with_ious({0.6, 0.6, 0.6}));
    CHECK(constant.auc == Approx(60.0).epsilon(1e-12));
    CHECK(constant.op50 == 100.0);
    CHECK(constant.op75 == 0.0);
  }

  TEST_CASE("report fields agree with the individual operations") {
    Rng rng(7);
    const TrackRun run = random_run(rng, 40);
    EvalOptions opts;
    opts.d_px = 7.5;
    opts.d_norm = 0.3;
    const MetricsReport r = evaluate_run(run, opts);
    CHECK(r.auc == auc(run));
    CHECK(r.op50 == overlap_precision(run, 0.5));
    CHECK(r.op75 == overlap_precision(run, 0.75));
    CHECK(r.precision == precision_at(run, 7.5));
    CHECK(r.norm_precision == norm_precision_at(run, 0.3));
    CHECK(r.frames == 40);
    CHECK(r.success_curve.size() == 101);
    CHECK(r.precision_curve.size() == 101);
    CHECK(r.norm_precision_curve.size() == 101);
    CHECK(r.success_curve.front().threshold == 0.0);
    CHECK(r.success_curve.back().threshold == 1.0);
    CHECK(r.precision_curve.back().threshold == 50.0);
    CHECK(r.norm_precision_curve.back().threshold == 0.5);
  }

  TEST_CASE("op50 and op75 equal the success curve samples") {
    Rng rng(8);
    for (int i = 0; i < 20; ++i) {
      const TrackRun run = random_run(rng, 30);
      const std::vector<double> t{0.5, 0.75};
      const Curve c = success_curve(run, t);
      CHECK(overlap_precision(run, 0.5) == Approx(100.0 * c[0].fraction));
      CHECK(overlap_precision(run, 0.75) == Approx(100.0 * c[1].fraction));
    }
  }

  TEST_CASE("curves are monotone") {
    Rng rng(9);
    const TrackRun run = random_run(rng, 50);
    const MetricsReport r = evaluate_run(run);
    for (std::size_t i = 1; i < r.success_curve.size(); ++i) {
      CHECK(r.success_curve[i].fraction <= r.success_curve[i - 1].fraction);
      CHECK(r.precision_curve[i].fraction >= r.precision_curve[i - 1].fraction);
      CHECK(r.norm_precision_curve[i].fraction >= r.norm_precision_curve[i - 1].fraction);
    }
    for (double d = 0; d < 60; d += 0.5) CHECK(precision_at(run, d) <= precision_at(run, d + 0.5));
  }

  TEST_CASE("quadrature agrees with the closed form") {
    Rng rng(10);
    for (int i = 0; i < 50; ++i) {
      const TrackRun run = random_run(rng, 1 + int(rng.next_u64() % 50));
      CHECK(std::fabs(auc_quadrature(run, 1000) - auc(run)) < 0.1);
    }
  }

  TEST_CASE("empty runs are rejected") {
    CHECK_THROWS_AS(auc(TrackRun{"e", {}}), ParameterError);
    CHECK_THROWS_AS(evaluate_run(TrackRun{"e", {}}), ParameterError);
  }

  TEST_CASE("pooling concatenates frames in the given order") {
    const TrackRun a = run_with_ious({1.0}, "a");
    const TrackRun b = run_with_ious({0.2, 0.2, 0.2}, "b");
    const std::vector<TrackRun> runs{a, b};
    const TrackRun all = pool_runs(runs, "ALL");
    CHECK(all.frames.size() == 4);
    CHECK(auc(all) == Approx(40.0));
  }

  TEST_CASE("json round trip and csv layout") {
    Rng rng(11);
    const MetricsReport r = evaluate_run(random_run(rng, 12));
    const MetricsReport back = report_from_json(nlohmann::ordered_json::parse(to_json(r).dump()));
    CHECK(back.auc == r.auc);
    CHECK(back.norm_precision == r.norm_precision);
    CHECK(back.frames == r.frames);
    CHECK(back.success_curve.size() == r.success_curve.size());
    CHECK(back.precision_curve[40].fraction == r.precision_curve[40].fraction);

    std::ostringstream csv;
    const std::vector<MetricsRow> rows{{"seq", r}, {"ALL", r}};
    write_metrics_csv(csv, "sequence", rows);
    std::istringstream lines(csv.str());
    std::string header, first;
    std::getline(lines, header);
    std::getline(lines, first);
    CHECK(header == "sequence,auc,op50,op75,precision,norm_precision");
    CHECK(first.rfind("seq," + format_metric(r.auc) + ",", 0) == 0);
    CHECK(format_metric(200.0 / 3.0) == "66.6667");
  }
}
