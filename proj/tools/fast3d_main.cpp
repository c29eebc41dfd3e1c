// Copyright (c) 2026 fast3d contributors
// SPDX-License-Identifier: Apache-2.0
//
// Command line entry points:
//
//   fast3d label    --manifest seq/manifest.json [--manifest ...] --out dir
//   fast3d simulate --scenario scenario.json --out dir [--seed N]
//   fast3d eval     --labels labels.jsonl --gt gt.jsonl --manifest m.json --out dir
//   fast3d closed-gap --adapted A --source-only S --fully-supervised F
//
// Exit codes: 0 success, 1 bad input (files, values), 2 internal error.

#include <fast3d/config.hpp>
#include <fast3d/errors.hpp>
#include <fast3d/metrics.hpp>
#include <fast3d/pipeline.hpp>
#include <fast3d/scenario.hpp>

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <string>
#include <vector>

namespace {

int run_label_command(const std::vector<std::string>& manifests, const std::string& out_dir,
                      const std::string& config_path, bool write_text, int jobs_override,
                      std::uint64_t seed_override, bool seed_given) {
  fast3d::PipelineConfig config;
  if (!config_path.empty()) config = fast3d::read_pipeline_config(config_path);
  if (jobs_override > 0) config.jobs = jobs_override;
  if (seed_given) config.seed = seed_override;

  std::vector<std::filesystem::path> paths(manifests.begin(), manifests.end());
  const auto summaries = fast3d::run_label(paths, out_dir, config, write_text);
  for (const fast3d::SequenceSummary& s : summaries) {
    std::printf("%s: %zu frames, %zu fused detections, %zu tracks -> %zu labels "
                "(kept %zu, removed %zu, recovered %zu, %zu backward states)\n",
                s.sequence_id.c_str(), s.frames, s.fused_detections,
                s.refine.input_tracks, s.labels, s.refine.kept, s.refine.removed,
                s.refine.recovered, s.refine.backward_states);
  }
  std::printf("wrote %s\n", (std::filesystem::path(out_dir) / "summary.json").c_str());
  return 0;
}

int run_simulate_command(const std::string& scenario_path, const std::string& out_dir,
                         std::uint64_t seed, const std::string& template_path) {
  if (!template_path.empty()) {
    fast3d::ScenarioSpec spec;
    spec.duration_frames = 100;
    fast3d::ObjectSpec mover;
    mover.start_xy = fast3d::Vec2(12.0, 2.0);
    mover.segments.push_back({0, fast3d::Vec3(2.0, 0.0, 0.0)});
    spec.objects.push_back(mover);
    fast3d::write_scenario(template_path, spec);
    std::printf("wrote scenario template %s\n", template_path.c_str());
    return 0;
  }
  const fast3d::ScenarioSpec spec = fast3d::read_scenario(scenario_path);
  spec.validate();
  const fast3d::SimulateSummary summary = fast3d::run_simulate(spec, seed, out_dir);
  std::printf("simulated %zu frames, %zu objects, %zu ground-truth labels into %s\n",
              summary.frames, summary.objects, summary.gt_labels, out_dir.c_str());
  return 0;
}

int run_eval_command(const std::string& labels, const std::string& gt,
                     const std::string& manifest, const std::string& out_dir,
                     const std::string& config_path) {
  fast3d::EvalConfig config;
  if (!config_path.empty()) config = fast3d::read_pipeline_config(config_path).eval;
  const fast3d::MetricsReport report =
      fast3d::run_eval(labels, gt, manifest, config, out_dir);
  std::fputs(fast3d::render_table(report).c_str(), stdout);
  return 0;
}

int run_closed_gap_command(double adapted, double source_only, double fully_supervised) {
  const double gap = fast3d::closed_gap(adapted, source_only, fully_supervised);
  std::printf("%.2f\n", gap);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudo-labeling for sequential point clouds: multi-scale detection fusion, "
               "flow tracking, track refinement, synthetic scenes, and evaluation"};
  app.require_subcommand(1);

  // label
  std::vector<std::string> manifests;
  std::string out_dir;
  std::string config_path;
  bool write_text = false;
  int jobs = 0;
  std::uint64_t seed = 0;
  auto* label = app.add_subcommand("label", "Label sequences with refined tracks");
  label->add_option("--manifest", manifests, "Sequence manifest (repeatable)")
      ->required()
      ->expected(-1);
  label->add_option("--out", out_dir, "Output directory")->required();
  label->add_option("--config", config_path, "Pipeline config JSON");
  label->add_flag("--write-text", write_text, "Also write per-frame sensor-frame text files");
  label->add_option("--jobs", jobs, "Parallel sequences (overrides config)");
  auto* label_seed = label->add_option("--seed", seed, "RANSAC seed (overrides config)");

  // simulate
  std::string scenario_path;
  std::string sim_out;
  std::uint64_t sim_seed = 0;
  std::string template_path;
  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic labeled sequence");
  auto* scenario_opt = simulate->add_option("--scenario", scenario_path, "Scenario JSON");
  auto* sim_out_opt = simulate->add_option("--out", sim_out, "Output directory");
  simulate->add_option("--seed", sim_seed, "Scene seed");
  simulate->add_option("--write-template", template_path,
                       "Write an example scenario file here and exit");

  // eval
  std::string labels_path;
  std::string gt_path;
  std::string manifest_path;
  std::string eval_out;
  std::string eval_config;
  auto* eval = app.add_subcommand("eval", "Score labels against ground truth");
  eval->add_option("--labels", labels_path, "Label file (JSON lines)")->required();
  eval->add_option("--gt", gt_path, "Ground truth label file")->required();
  eval->add_option("--manifest", manifest_path, "Manifest supplying per-frame poses")
      ->required();
  eval->add_option("--out", eval_out, "Output directory")->required();
  eval->add_option("--config", eval_config, "Pipeline config JSON (eval section)");

  // closed-gap
  double adapted = 0.0;
  double source_only = 0.0;
  double fully_supervised = 0.0;
  auto* gap = app.add_subcommand("closed-gap",
                                 "Fraction of the source-to-supervised gap closed, percent");
  gap->add_option("--adapted", adapted, "AP after adaptation")->required();
  gap->add_option("--source-only", source_only, "AP of the unadapted source model")
      ->required();
  gap->add_option("--fully-supervised", fully_supervised, "AP of the supervised upper bound")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Fold CLI11's many parse-error codes into the documented contract:
    // 0 for --help, 1 for a bad command line.
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (app.got_subcommand(label)) {
      return run_label_command(manifests, out_dir, config_path, write_text, jobs, seed,
                               !label_seed->empty());
    }
    if (app.got_subcommand(simulate)) {
      if (template_path.empty()) {
        if (scenario_opt->empty() || sim_out_opt->empty()) {
          std::fprintf(stderr, "simulate needs --scenario and --out (or --write-template)\n");
          return 1;
        }
      }
      return run_simulate_command(scenario_path, sim_out, sim_seed, template_path);
    }
    if (app.got_subcommand(eval)) {
      return run_eval_command(labels_path, gt_path, manifest_path, eval_out, eval_config);
    }
    if (app.got_subcommand(gap)) {
      return run_closed_gap_command(adapted, source_only, fully_supervised);
    }
    std::fprintf(stderr, "no subcommand\n");
    return 2;
  } catch (const fast3d::DatasetError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 2;
  }
}
