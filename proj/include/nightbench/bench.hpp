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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "nightbench/degrade.hpp"
#include "nightbench/metrics.hpp"
#include "nightbench/ncc_tracker.hpp"
#include "nightbench/preprocess.hpp"
#include "nightbench/sweep.hpp"

namespace nightbench {

// A path is either one sequence directory (has groundtruth.txt) or a corpus
// whose immediate subdirectories are sequences. Returned sorted by id.
std::vector<std::filesystem::path> discover_sequences(const std::filesystem::path& root);

struct DegradeSummary {
  std::string sequence_id;
  std::size_t frames = 0;
  std::filesystem::path out_dir;
};

// Degrades one sequence into out_dir, or a corpus into out_dir/<id> plus a
// list.txt of sequence ids.
std::vector<DegradeSummary> cmd_degrade(const std::filesystem::path& in_dir, const std::filesystem::path& out_dir,
                                        const DegradationParams& params, const DegradeOptions& options = {});

struct TrackSummary {
  std::string sequence_id;
  std::size_t frames = 0;
  std::size_t failures = 0;
};

// Tracks with the NCC baseline, initialized from the first ground-truth box
// unless `init` is given, and writes the prediction file.
TrackSummary cmd_track(const std::filesystem::path& seq_dir, const PreprocessSpec& preprocess,
                       const std::filesystem::path& out_path, const NccOptions& options = {},
                       const std::optional<BoundingBox>& init = std::nullopt);

struct EvalResult {
  std::vector<MetricsRow> sequences;
  MetricsReport all;
};

// Evaluates runs individually and frame-pooled (the ALL row), in the order given.
EvalResult evaluate_runs(std::span<const TrackRun> runs, const EvalOptions& options);

EvalResult cmd_eval(const std::filesystem::path& seq_dir, const std::filesystem::path& pred_path,
                    const EvalOptions& options = {});

nlohmann::ordered_json eval_json(const EvalResult& result);
// `sequence,...` rows followed by the ALL row.
std::string eval_csv(const EvalResult& result);
void write_eval_outputs(const EvalResult& result, const std::filesystem::path& out_dir, std::string_view config,
                        const nlohmann::ordered_json& extra = {});

struct SweepPoint {
  double value = 0.0;
  DegradationParams params;
  std::optional<EvalResult> result;
  std::string error;
};

struct SweepResult {
  SweepAxis axis = SweepAxis::kNoise;
  DegradationParams defaults;
  std::string preprocess;
  std::vector<SweepPoint> points;  // ascending by value

  std::size_t failures() const;
};

struct SweepOptions {
  NccOptions tracker;
  EvalOptions eval;
  DegradeOptions degrade;
};

/// For each value (ascending): degrade every sequence, track with the
/// optional preprocess, evaluate. Writes per-value reports under
/// out_dir/<axis>_<value>/, a curve_<axis>.csv, sweep.json, and run_meta.json
/// (the only file with wall-clock content). A failing value is recorded and
/// the sweep moves on.
SweepResult cmd_sweep(std::span<const std::filesystem::path> seq_dirs, const SweepSpec& spec,
                      const PreprocessSpec& preprocess, const std::filesystem::path& out_dir,
                      const SweepOptions& options = {});

struct ReportFiles {
  std::filesystem::path table;
  std::vector<std::filesystem::path> curves;
  std::size_t configurations = 0;
};

// Collects every report.json below results_dir into table.csv
// (`config,auc,op50,op75,precision,norm_precision`) and one
// curve_<axis>.csv (`value,...`) per swept axis, written to out_dir.
ReportFiles cmd_report(const std::filesystem::path& results_dir, const std::filesystem::path& out_dir);

std::string sweep_point_label(SweepAxis axis, double value);

}  // namespace nightbench
