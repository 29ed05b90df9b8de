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

#include "nightbench/bench.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "nightbench/config.hpp"
#include "nightbench/dataset.hpp"
#include "nightbench/error.hpp"

namespace nightbench {

namespace fs = std::filesystem;

namespace {

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path.string() + ": cannot open file for writing");
  out << text;
  if (!out) throw IoError(path.string() + ": write failed");
}

std::string dump(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

nlohmann::ordered_json scalars_json(const MetricsReport& r) {
  nlohmann::ordered_json j;
  j["auc"] = r.auc;
  j["op50"] = r.op50;
  j["op75"] = r.op75;
  j["precision"] = r.precision;
  j["norm_precision"] = r.norm_precision;
  j["frames"] = r.frames;
  return j;
}

nlohmann::ordered_json params_json(const DegradationParams& p) {
  nlohmann::ordered_json j;
  j["alpha"] = p.alpha;
  j["beta"] = p.beta;
  j["gamma"] = p.gamma;
  j["alpha_s"] = p.alpha_s;
  j["sigma"] = p.sigma;
  j["mu"] = p.mu;
  j["seed"] = p.seed;
  return j;
}

std::string sweep_dir_name(SweepAxis axis, double value) {
  return std::string(to_string(axis)) + "_" + format_coordinate(value);
}

std::string iso_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::vector<fs::path> discover_sequences(const fs::path& root) {
  if (fs::exists(root / kGroundTruthFile)) return {root};
  if (!fs::is_directory(root)) throw LoadError(root.string() + ": not a sequence or corpus directory");
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory() && fs::exists(entry.path() / kGroundTruthFile)) out.push_back(entry.path());
  }
  if (out.empty()) throw LoadError(root.string() + ": no sequences (directories with groundtruth.txt) found");
  std::sort(out.begin(), out.end(), [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
  return out;
}

std::vector<DegradeSummary> cmd_degrade(const fs::path& in_dir, const fs::path& out_dir,
                                        const DegradationParams& params, const DegradeOptions& options) {
  validate(params);
  const bool single = fs::exists(in_dir / kGroundTruthFile);
  std::vector<DegradeSummary> summaries;
  std::string list;
  for (const auto& seq : discover_sequences(in_dir)) {
    const SequenceManifest manifest = load_sequence(seq);
    const fs::path target = single ? out_dir : out_dir / manifest.id;
    degrade_sequence(manifest, params, target, options);
    summaries.push_back({manifest.id, manifest.size(), target});
    list += manifest.id + "\n";
  }
  if (!single) write_text(out_dir / "list.txt", list);
  return summaries;
}

TrackSummary cmd_track(const fs::path& seq_dir, const PreprocessSpec& preprocess, const fs::path& out_path,
                       const NccOptions& options, const std::optional<BoundingBox>& init) {
  validate(preprocess);
  const SequenceManifest manifest = load_sequence(seq_dir);
  const TrackRun run = ncc_track(manifest, init.value_or(manifest.groundtruth.front()), options, preprocess);
  if (out_path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(out_path.parent_path(), ec);
  }
  write_predictions(run, out_path);
  TrackSummary summary{manifest.id, run.frames.size(), 0};
  summary.failures = static_cast<std::size_t>(
      std::count_if(run.frames.begin(), run.frames.end(), [](const FramePair& f) { return !f.pred; }));
  return summary;
}

EvalResult evaluate_runs(std::span<const TrackRun> runs, const EvalOptions& options) {
  if (runs.empty()) throw ParameterError("nothing to evaluate");
  EvalResult result;
  for (const auto& run : runs) result.sequences.push_back({run.sequence_id, evaluate_run(run, options)});
  result.all = evaluate_run(pool_runs(runs, "ALL"), options);
  return result;
}

EvalResult cmd_eval(const fs::path& seq_dir, const fs::path& pred_path, const EvalOptions& options) {
  const SequenceManifest manifest = load_sequence(seq_dir);
  const TrackRun run = parse_predictions(pred_path, manifest);
  return evaluate_runs(std::span<const TrackRun>(&run, 1), options);
}

nlohmann::ordered_json eval_json(const EvalResult& result) {
  nlohmann::ordered_json j = to_json(result.all);
  auto seqs = nlohmann::ordered_json::array();
  for (const auto& row : result.sequences) {
    nlohmann::ordered_json s;
    s["sequence"] = row.label;
    s.update(scalars_json(row.report));
    seqs.push_back(std::move(s));
  }
  j["sequences"] = std::move(seqs);
  return j;
}

std::string eval_csv(const EvalResult& result) {
  std::vector<MetricsRow> rows = result.sequences;
  rows.push_back({"ALL", result.all});
  std::ostringstream out;
  write_metrics_csv(out, "sequence", rows);
  return out.str();
}

void write_eval_outputs(const EvalResult& result, const fs::path& out_dir, std::string_view config,
                        const nlohmann::ordered_json& extra) {
  nlohmann::ordered_json j;
  j["config"] = config;
  if (extra.is_object()) j.update(extra);
  j["metrics"] = eval_json(result);
  write_text(out_dir / "report.json", dump(j));
  write_text(out_dir / "report.csv", eval_csv(result));
}

std::string sweep_point_label(SweepAxis axis, double value) {
  return std::string(to_string(axis)) + "=" + format_coordinate(value);
}

std::size_t SweepResult::failures() const {
  return static_cast<std::size_t>(
      std::count_if(points.begin(), points.end(), [](const SweepPoint& p) { return !p.result; }));
}

SweepResult cmd_sweep(std::span<const fs::path> seq_dirs, const SweepSpec& spec, const PreprocessSpec& preprocess,
                      const fs::path& out_dir, const SweepOptions& options) {
  validate(preprocess);
  SweepSpec sorted = spec;
  std::sort(sorted.values.begin(), sorted.values.end());
  const auto grid = sweep_grid(sorted);

  std::vector<fs::path> sequences;
  for (const auto& dir : seq_dirs) {
    for (auto& s : discover_sequences(dir)) sequences.push_back(std::move(s));
  }
  if (sequences.empty()) throw UsageError("sweep needs at least one sequence");
  std::stable_sort(sequences.begin(), sequences.end(),
                   [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
  for (std::size_t i = 1; i < sequences.size(); ++i) {
    if (sequences[i].filename() == sequences[i - 1].filename()) {
      throw UsageError("duplicate sequence id '" + sequences[i].filename().string() + "' in sweep inputs");
    }
  }

  SweepResult result;
  result.axis = spec.axis;
  result.defaults = spec.defaults;
  result.preprocess = to_string(preprocess);

  std::string curve;
  {
    std::ostringstream header;
    write_metrics_csv(header, "value", std::span<const MetricsRow>());
    curve = header.str();
  }

  nlohmann::ordered_json points = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    SweepPoint point{sorted.values[i], grid[i], std::nullopt, {}};
    const fs::path value_dir = out_dir / sweep_dir_name(spec.axis, point.value);
    const std::string label = sweep_point_label(spec.axis, point.value);
    try {
      std::vector<TrackRun> runs;
      for (const auto& seq : sequences) {
        const SequenceManifest manifest = load_sequence(seq);
        const SequenceManifest degraded =
            degrade_sequence(manifest, point.params, value_dir / "corpus" / manifest.id, options.degrade);
        TrackRun run = ncc_track(degraded, degraded.groundtruth.front(), options.tracker, preprocess);
        write_predictions(run, (fs::create_directories(value_dir / "predictions"),
                                value_dir / "predictions" / (manifest.id + ".txt")));
        runs.push_back(std::move(run));
      }
      point.result = evaluate_runs(runs, options.eval);

      nlohmann::ordered_json extra;
      extra["axis"] = to_string(spec.axis);
      extra["value"] = point.value;
      extra["params"] = params_json(point.params);
      extra["preprocess"] = result.preprocess;
      write_eval_outputs(*point.result, value_dir, label, extra);

      std::ostringstream row;
      const MetricsRow csv_row{format_coordinate(point.value), point.result->all};
      write_metrics_csv(row, "value", std::span<const MetricsRow>(&csv_row, 1));
      const std::string text = row.str();
      curve += text.substr(text.find('\n') + 1);
    } catch (const std::exception& e) {
      point.error = e.what();
    }

    nlohmann::ordered_json pj;
    pj["value"] = point.value;
    pj["config"] = label;
    if (point.result) {
      pj["metrics"] = scalars_json(point.result->all);
    } else {
      pj["error"] = point.error;
    }
    points.push_back(std::move(pj));
    result.points.push_back(std::move(point));
  }

  nlohmann::ordered_json summary;
  summary["axis"] = to_string(spec.axis);
  summary["values"] = sorted.values;
  summary["defaults"] = params_json(spec.defaults);
  summary["preprocess"] = result.preprocess;
  auto ids = nlohmann::ordered_json::array();
  for (const auto& s : sequences) ids.push_back(s.filename().string());
  summary["sequences"] = std::move(ids);
  summary["points"] = std::move(points);
  write_text(out_dir / "sweep.json", dump(summary));
  write_text(out_dir / ("curve_" + std::string(to_string(spec.axis)) + ".csv"), curve);

  nlohmann::ordered_json meta;
  meta["timestamp"] = iso_timestamp();
  meta["seed"] = spec.defaults.seed;
  meta["failures"] = result.failures();
  write_text(out_dir / "run_meta.json", dump(meta));
  return result;
}

ReportFiles cmd_report(const fs::path& results_dir, const fs::path& out_dir) {
  if (!fs::is_directory(results_dir)) throw LoadError(results_dir.string() + ": not a directory");

  struct Entry {
    std::string axis;
    double value = 0.0;
    std::string config;
    MetricsReport report;
  };
  std::vector<Entry> entries;
  for (const auto& file : fs::recursive_directory_iterator(results_dir)) {
    if (!file.is_regular_file() || file.path().filename() != "report.json") continue;
    std::ifstream in(file.path(), std::ios::binary);
    nlohmann::ordered_json j;
    try {
      j = nlohmann::ordered_json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(file.path().string() + ": " + e.what());
    }
    if (!j.contains("config") || !j.contains("metrics")) continue;
    Entry e;
    e.config = j["config"].get<std::string>();
    if (j.contains("axis")) e.axis = j["axis"].get<std::string>();
    if (j.contains("value")) e.value = j["value"].get<double>();
    e.report = report_from_json(j["metrics"]);
    entries.push_back(std::move(e));
  }
  if (entries.empty()) throw LoadError(results_dir.string() + ": no report.json files found");

  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return std::tie(a.axis, a.value, a.config) < std::tie(b.axis, b.value, b.config);
  });

  ReportFiles files;
  files.configurations = entries.size();
  std::vector<MetricsRow> table;
  std::map<std::string, std::vector<MetricsRow>> curves;
  for (const auto& e : entries) {
    table.push_back({e.config, e.report});
    if (!e.axis.empty()) curves[e.axis].push_back({format_coordinate(e.value), e.report});
  }

  std::ostringstream table_csv;
  write_metrics_csv(table_csv, "config", table);
  files.table = out_dir / "table.csv";
  write_text(files.table, table_csv.str());
  for (const auto& [axis, rows] : curves) {
    std::ostringstream csv;
    write_metrics_csv(csv, "value", rows);
    const fs::path path = out_dir / ("curve_" + axis + ".csv");
    write_text(path, csv.str());
    files.curves.push_back(path);
  }
  return files;
}

}  // namespace nightbench
