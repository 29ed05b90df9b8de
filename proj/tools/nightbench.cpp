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

// nightbench: degrade, track, eval, sweep and report over sequence corpora.
// Exit codes: 0 success, 1 runtime failure, 2 usage error.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nightbench/bench.hpp"
#include "nightbench/config.hpp"
#include "nightbench/dataset.hpp"
#include "nightbench/error.hpp"
#include "nightbench/grad_check.hpp"
#include "nightbench/model_io.hpp"

namespace fs = std::filesystem;
using namespace nightbench;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

std::optional<BoundingBox> parse_init(const std::string& text) {
  if (text.empty()) return std::nullopt;
  const auto boxes = parse_groundtruth_text(text, "--init");
  if (boxes.size() != 1) throw UsageError("--init takes exactly one x,y,w,h box");
  return boxes.front();
}

void print_summary_line(const char* label, const MetricsReport& r) {
  std::printf("%s auc=%.4f op50=%.4f op75=%.4f precision=%.4f norm_precision=%.4f frames=%zu\n", label, r.auc, r.op50,
              r.op75, r.precision, r.norm_precision, r.frames);
}

struct DegradeArgs {
  std::string in, out, config;
  std::uint64_t seed = 0;
  unsigned threads = 0;
};

int run_degrade(const DegradeArgs& a) {
  DegradationParams params = params_from_config(load_kv_config(a.config), true);
  params.seed = a.seed;
  DegradeOptions options;
  options.threads = a.threads;
  for (const auto& s : cmd_degrade(a.in, a.out, params, options)) {
    std::printf("%s frames=%zu -> %s\n", s.sequence_id.c_str(), s.frames, s.out_dir.string().c_str());
  }
  std::fputs(format_degradation_config(params).c_str(), stdout);
  return kExitOk;
}

struct TrackArgs {
  std::string seq, preprocess = "none", out, init;
  int radius = NccOptions{}.search_radius;
  bool no_refresh = false;
};

int run_track(const TrackArgs& a) {
  NccOptions options;
  options.search_radius = a.radius;
  options.refresh_template = !a.no_refresh;
  const auto s = cmd_track(a.seq, parse_preprocess_spec(a.preprocess), a.out, options, parse_init(a.init));
  std::printf("%s frames=%zu failures=%zu -> %s\n", s.sequence_id.c_str(), s.frames, s.failures, a.out.c_str());
  return kExitOk;
}

struct EvalArgs {
  std::string seq, pred, out;
  double d_px = EvalOptions{}.d_px;
  double d_norm = EvalOptions{}.d_norm;
};

int run_eval(const EvalArgs& a) {
  EvalOptions options;
  options.d_px = a.d_px;
  options.d_norm = a.d_norm;
  const EvalResult result = cmd_eval(a.seq, a.pred, options);
  if (!a.out.empty()) {
    write_eval_outputs(result, a.out, result.sequences.front().label);
  }
  std::fputs(eval_csv(result).c_str(), stdout);
  return kExitOk;
}

struct SweepArgs {
  std::vector<std::string> seqs;
  std::string axis, values, config, preprocess = "none", out;
  std::uint64_t seed = 0;
  int radius = NccOptions{}.search_radius;
  double d_px = EvalOptions{}.d_px;
  double d_norm = EvalOptions{}.d_norm;
};

int run_sweep(const SweepArgs& a) {
  KeyValueConfig cfg;
  if (!a.config.empty()) cfg = load_kv_config(a.config);

  SweepSpec spec;
  spec.defaults = params_from_config(cfg, false);
  spec.defaults.seed = a.seed;
  std::string axis = a.axis;
  if (axis.empty() && cfg.count("axis")) axis = cfg.at("axis");
  if (axis.empty()) throw UsageError("sweep needs --axis (or an axis key in --config)");
  spec.axis = parse_sweep_axis(axis);
  if (!a.values.empty()) {
    spec.values = parse_value_list(a.values);
  } else if (cfg.count("values")) {
    spec.values = parse_value_list(cfg.at("values"));
  } else {
    spec.values = standard_sweep_values(spec.axis);
  }

  SweepOptions options;
  options.tracker.search_radius = a.radius;
  options.eval.d_px = a.d_px;
  options.eval.d_norm = a.d_norm;
  std::vector<fs::path> dirs(a.seqs.begin(), a.seqs.end());
  const SweepResult result = cmd_sweep(dirs, spec, parse_preprocess_spec(a.preprocess), a.out, options);

  for (const auto& p : result.points) {
    const std::string label = sweep_point_label(result.axis, p.value);
    if (p.result) {
      print_summary_line(label.c_str(), p.result->all);
    } else {
      std::fprintf(stderr, "%s failed: %s\n", label.c_str(), p.error.c_str());
    }
  }
  return result.failures() == 0 ? kExitOk : kExitRuntime;
}

struct ReportArgs {
  std::string results, out;
};

int run_report(const ReportArgs& a) {
  const auto files = cmd_report(a.results, a.out.empty() ? a.results : a.out);
  std::printf("%zu configurations -> %s\n", files.configurations, files.table.string().c_str());
  for (const auto& c : files.curves) std::printf("curve -> %s\n", c.string().c_str());
  return kExitOk;
}

struct GradCheckArgs {
  std::uint64_t seed = 0;
  int dim = 4;
  std::string mam, spm, dump_dir;
};

int run_gradcheck(const GradCheckArgs& a) {
  if (a.dim < 1) throw UsageError("--dim must be >= 1");
  const MamParams mam = a.mam.empty() ? MamParams::random(a.dim, derive_seed(a.seed, 1)) : load_mam_params(a.mam);
  const SpmParams spm = a.spm.empty() ? SpmParams::random(a.dim, 2 * a.dim, derive_seed(a.seed, 2))
                                      : load_spm_params(a.spm);
  if (!a.dump_dir.empty()) {
    fs::create_directories(a.dump_dir);
    save_params(fs::path(a.dump_dir) / "mam.txt", mam);
    save_params(fs::path(a.dump_dir) / "spm.txt", spm);
  }
  const int d = mam.dim();
  const TokenSeq target = TokenSeq::random(2, 3, d, derive_seed(a.seed, 3));
  const TokenSeq search = TokenSeq::random(2, 5, d, derive_seed(a.seed, 4));
  const TokenSeq roi = TokenSeq::random(2, 2, spm.dim(), derive_seed(a.seed, 5));
  const TokenSeq init = TokenSeq::random(2, 3, spm.dim(), derive_seed(a.seed, 6));

  const std::vector<std::pair<const char*, GradCheckReport>> reports = {
      {"mixed_attention", check_mixed_attention_gradients(target, search, mam, derive_seed(a.seed, 7))},
      {"spm_score", check_spm_gradients(spm, roi, init)},
      {"score_loss", check_score_loss_gradient(0.3, 1)},
      {"giou", check_giou_gradients({0.3, 0.2, 1.9, 2.1}, {0.0, 0.0, 2.0, 2.0})},
      {"l1_giou_loss", check_l1_giou_gradients({0.3, 0.2, 1.9, 2.1}, {0.0, 0.0, 2.0, 2.0})},
  };
  bool ok = true;
  for (const auto& [name, r] : reports) {
    std::printf("%-16s %s\n", name, r.summary().c_str());
    ok = ok && r.passed();
  }
  return ok ? kExitOk : kExitRuntime;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Low-light tracking benchmark harness"};
  app.require_subcommand(1);

  DegradeArgs degrade;
  auto* deg = app.add_subcommand("degrade", "Apply the low-light degradation model to a sequence or corpus");
  deg->add_option("--in", degrade.in, "Sequence directory or corpus of sequences")->required();
  deg->add_option("--out", degrade.out, "Output directory")->required();
  deg->add_option("--config", degrade.config, "key = value degradation config")->required();
  deg->add_option("--seed", degrade.seed, "Noise seed")->required();
  deg->add_option("--threads", degrade.threads, "Worker threads (0 = hardware concurrency)");

  TrackArgs track;
  auto* trk = app.add_subcommand("track", "Run the NCC baseline tracker on one sequence");
  trk->add_option("--seq", track.seq, "Sequence directory")->required();
  trk->add_option("--out", track.out, "Prediction file to write")->required();
  trk->add_option("--preprocess", track.preprocess,
                  "none | median[:radius] | gaussian_blur[:sigma] | gamma_boost[:gamma] | external:<cmd {in} {out}>");
  trk->add_option("--radius", track.radius, "Search radius in pixels");
  trk->add_option("--init", track.init, "Initial box x,y,w,h (default: first ground-truth box)");
  trk->add_flag("--no-refresh", track.no_refresh, "Keep the initial template for the whole run");

  EvalArgs eval;
  auto* evl = app.add_subcommand("eval", "Score a prediction file against a sequence's ground truth");
  evl->add_option("--seq", eval.seq, "Sequence directory")->required();
  evl->add_option("--pred", eval.pred, "Prediction file")->required();
  evl->add_option("--d-px", eval.d_px, "Precision threshold in pixels")->capture_default_str();
  evl->add_option("--d-norm", eval.d_norm, "Normalized precision threshold")->capture_default_str();
  evl->add_option("--out", eval.out, "Directory for report.json and report.csv");

  SweepArgs sweep;
  auto* swp = app.add_subcommand("sweep", "One-factor sweep: degrade, track and evaluate per value");
  swp->add_option("--seqs", sweep.seqs, "Sequence or corpus directories")->required()->expected(1, -1);
  swp->add_option("--axis", sweep.axis, "noise | gamma | saturation");
  swp->add_option("--values", sweep.values, "Comma-separated values (default: the standard grid)");
  swp->add_option("--config", sweep.config, "key = value defaults for the other model parameters");
  swp->add_option("--preprocess", sweep.preprocess, "Preprocess applied before tracking");
  swp->add_option("--out", sweep.out, "Output directory")->required();
  swp->add_option("--seed", sweep.seed, "Noise seed")->required();
  swp->add_option("--radius", sweep.radius, "Search radius in pixels");
  swp->add_option("--d-px", sweep.d_px, "Precision threshold in pixels")->capture_default_str();
  swp->add_option("--d-norm", sweep.d_norm, "Normalized precision threshold")->capture_default_str();

  ReportArgs report;
  auto* rep = app.add_subcommand("report", "Collect report.json files into table and curve CSVs");
  rep->add_option("--results", report.results, "Results directory")->required();
  rep->add_option("--out", report.out, "Output directory (default: --results)");

  GradCheckArgs gc;
  auto* grd = app.add_subcommand("gradcheck", "Finite-difference check of the toy model gradients");
  grd->add_option("--seed", gc.seed, "Seed for random parameters and inputs");
  grd->add_option("--dim", gc.dim, "Token dimension for random parameters");
  grd->add_option("--mam", gc.mam, "Mixed attention parameter file");
  grd->add_option("--spm", gc.spm, "Score head parameter file");
  grd->add_option("--dump-dir", gc.dump_dir, "Write the parameters used to mam.txt / spm.txt here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*deg) return run_degrade(degrade);
    if (*trk) return run_track(track);
    if (*evl) return run_eval(eval);
    if (*swp) return run_sweep(sweep);
    if (*rep) return run_report(report);
    if (*grd) return run_gradcheck(gc);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }
  return kExitUsage;
}
