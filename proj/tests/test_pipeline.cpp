// Copyright (c) 2026 fast3d contributors
// SPDX-License-Identifier: Apache-2.0

#include <fast3d/dataset_io.hpp>
#include <fast3d/errors.hpp>
#include <fast3d/pipeline.hpp>
#include <fast3d/preprocess.hpp>

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <string>

#include <json.hpp>

namespace fast3d {
namespace {

// A clean little world: a mover, a parked vehicle, and a pedestrian, watched
// by a static ego over flat ground. No detector noise unless a test adds it.
ScenarioSpec clean_scene() {
  ScenarioSpec spec;
  spec.sequence_id = "clean";
  spec.duration_frames = 20;
  spec.ground_density_per_m2 = 1.0;
  spec.ground_margin_m = 8.0;

  ObjectSpec mover;
  mover.start_xy = Vec2(12.0, 2.0);
  mover.point_density_per_m2 = 6.0;
  mover.segments.push_back({0, Vec3(2.0, 0.0, 0.0)});
  spec.objects.push_back(mover);

  ObjectSpec parked;
  parked.start_xy = Vec2(8.0, -3.0);
  parked.point_density_per_m2 = 6.0;
  spec.objects.push_back(parked);

  ObjectSpec ped;
  ped.cls = ObjectClass::Pedestrian;
  ped.dims = Vec3(0.8, 0.8, 1.7);
  ped.start_xy = Vec2(15.0, 4.0);
  ped.point_density_per_m2 = 30.0;
  spec.objects.push_back(ped);
  return spec;
}

ScenarioData simulated(const ScenarioSpec& spec, std::uint64_t seed) {
  ScenarioData data = generate_scenario(spec, seed);
  simulate_detections(data.dataset, data.gt, spec, seed + 1);
  return data;
}

std::filesystem::path temp_dir(const char* name) {
  const auto dir = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

TEST_SUITE("pipeline") {

TEST_CASE("prepared frames carry fused world boxes and a ground-free flow cloud") {
  const ScenarioData data = simulated(clean_scene(), 100);
  PipelineConfig cfg;
  const auto prepared = prepare_frames(data.dataset, cfg);
  REQUIRE(prepared.size() == data.dataset.frames.size());

  for (std::size_t f = 0; f < prepared.size(); ++f) {
    const PreparedFrame& frame = prepared[f];
    CHECK(frame.index == data.dataset.frames[f].index);
    CHECK(frame.fused.size() == 3);  // one box per object, three scales merged

    for (const Detection& det : frame.fused.detections) {
      // Fused boxes are in the world frame: ground truth positions match.
      bool matched = false;
      for (const GroundTruthObject& obj : data.gt.objects) {
        if (!obj.box_by_frame[f]) continue;
        if ((det.box.center - obj.box_by_frame[f]->center).norm() < 1e-6) {
          matched = true;
          CHECK(det.cls == obj.cls);
        }
      }
      CHECK(matched);
      CHECK(det.point_count > 15);
      CHECK(det.point_count ==
            static_cast<int>(count_points_in_box(det.box, frame.cloud)));
    }

    // The carpet is gone from the flow cloud but stays in the full cloud.
    CHECK(frame.flow_cloud.size() < frame.cloud.size());
    CHECK(frame.flow_cloud.size() > 0);
    if (frame.forward_flow) CHECK(frame.forward_flow->size() == frame.flow_cloud.size());
    if (frame.backward_flow) CHECK(frame.backward_flow->size() == frame.flow_cloud.size());
    for (const Vec3& p : frame.flow_cloud.points) CHECK(p.z() > 0.1);
  }

  // Same inputs, same output.
  const auto again = prepare_frames(data.dataset, cfg);
  REQUIRE(again.size() == prepared.size());
  for (std::size_t f = 0; f < prepared.size(); ++f) {
    CHECK(again[f].flow_cloud.size() == prepared[f].flow_cloud.size());
    REQUIRE(again[f].fused.size() == prepared[f].fused.size());
    for (std::size_t i = 0; i < prepared[f].fused.size(); ++i) {
      CHECK(again[f].fused.detections[i].box.center ==
            prepared[f].fused.detections[i].box.center);
    }
  }
}

TEST_CASE("a clean scene is labeled perfectly") {
  const ScenarioData data = simulated(clean_scene(), 200);
  PipelineConfig cfg;
  const LabelOutput output = label_sequence(data.dataset, cfg);

  CHECK(output.summary.refine.input_tracks == 3);
  CHECK(output.summary.refine.kept == 3);
  CHECK(output.summary.refine.removed == 0);

  const std::vector<PseudoLabel> gt = ground_truth_labels(data.gt);
  REQUIRE(output.labels.size() == gt.size());

  std::map<int, RigidPose> poses;
  for (const FrameRecord& record : data.dataset.frames) {
    poses.emplace(record.index, record.pose);
  }
  const MetricsReport report = compute_metrics(output.labels, gt, poses, cfg.eval);
  for (const MetricsRow& row : report.rows) {
    CHECK(row.precision == 1.0);
    CHECK(row.recall == 1.0);
  }

  // Labels come out sorted by (frame, track_id).
  for (std::size_t i = 1; i < output.labels.size(); ++i) {
    const PseudoLabel& a = output.labels[i - 1];
    const PseudoLabel& b = output.labels[i];
    CHECK((a.frame < b.frame || (a.frame == b.frame && a.track_id < b.track_id)));
  }
}

TEST_CASE("run_simulate writes a loadable sequence directory") {
  const auto dir = temp_dir("fast3d_sim_out");
  ScenarioSpec spec = clean_scene();
  spec.duration_frames = 6;
  const SimulateSummary summary = run_simulate(spec, 42, dir);
  CHECK(summary.frames == 6);
  CHECK(summary.objects == 3);

  const SequenceDataset loaded = load_sequence(dir / "manifest.json");
  CHECK(loaded.sequence_id == "clean");
  CHECK(loaded.frames.size() == 6);
  CHECK(loaded.frames[0].detections.size() == 3);

  const auto gt = read_labels(dir / "gt.jsonl");
  CHECK(gt.size() == summary.gt_labels);
  CHECK(gt.size() > 0);

  const ScenarioSpec echoed = read_scenario(dir / "scenario.json");
  CHECK(echoed.duration_frames == 6);
  CHECK(echoed.objects.size() == 3);

  std::filesystem::remove_all(dir);
}

TEST_CASE("run_label produces files, summaries, and identical reruns") {
  const auto sim_dir = temp_dir("fast3d_label_sim");
  ScenarioSpec spec = clean_scene();
  spec.duration_frames = 8;
  run_simulate(spec, 77, sim_dir);

  PipelineConfig cfg;
  const auto out_a = temp_dir("fast3d_label_out_a");
  const auto summaries =
      run_label({sim_dir / "manifest.json"}, out_a, cfg, /*write_text=*/true);
  REQUIRE(summaries.size() == 1);
  CHECK(summaries[0].sequence_id == "clean");
  CHECK(summaries[0].frames == 8);
  CHECK(summaries[0].labels > 0);

  const auto labels_path = out_a / "clean" / "labels.jsonl";
  REQUIRE(std::filesystem::exists(labels_path));
  CHECK(read_labels(labels_path).size() == summaries[0].labels);
  CHECK(std::filesystem::exists(out_a / "summary.json"));
  CHECK(std::filesystem::exists(out_a / "effective_config.json"));
  CHECK_NOTHROW(read_pipeline_config(out_a / "effective_config.json"));

  // One text file per frame, sensor-frame boxes inside.
  for (int f = 0; f < 8; ++f) {
    char name[16];
    std::snprintf(name, sizeof name, "%06d.txt", f);
    CHECK(std::filesystem::exists(out_a / "clean" / "labels_txt" / name));
  }

  const auto out_b = temp_dir("fast3d_label_out_b");
  run_label({sim_dir / "manifest.json"}, out_b, cfg, true);
  CHECK(slurp(labels_path) == slurp(out_b / "clean" / "labels.jsonl"));
  CHECK(slurp(out_a / "summary.json") == slurp(out_b / "summary.json"));

  std::filesystem::remove_all(sim_dir);
  std::filesystem::remove_all(out_a);
  std::filesystem::remove_all(out_b);
}

TEST_CASE("run_label rejects duplicate sequence ids and labels in parallel") {
  const auto sim_a = temp_dir("fast3d_par_a");
  const auto sim_b = temp_dir("fast3d_par_b");
  ScenarioSpec spec = clean_scene();
  spec.duration_frames = 6;
  run_simulate(spec, 1, sim_a);
  spec.sequence_id = "clean2";
  run_simulate(spec, 2, sim_b);

  PipelineConfig cfg;
  cfg.jobs = 2;
  const auto out = temp_dir("fast3d_par_out");
  const auto summaries =
      run_label({sim_a / "manifest.json", sim_b / "manifest.json"}, out, cfg, false);
  REQUIRE(summaries.size() == 2);
  CHECK(summaries[0].sequence_id == "clean");
  CHECK(summaries[1].sequence_id == "clean2");
  CHECK(std::filesystem::exists(out / "clean" / "labels.jsonl"));
  CHECK(std::filesystem::exists(out / "clean2" / "labels.jsonl"));

  CHECK_THROWS_AS(run_label({sim_a / "manifest.json", sim_a / "manifest.json"}, out, cfg,
                            false),
                  std::invalid_argument);

  std::filesystem::remove_all(sim_a);
  std::filesystem::remove_all(sim_b);
  std::filesystem::remove_all(out);
}

TEST_CASE("run_eval writes both report forms") {
  const auto sim_dir = temp_dir("fast3d_eval_sim");
  ScenarioSpec spec = clean_scene();
  spec.duration_frames = 6;
  run_simulate(spec, 5, sim_dir);

  PipelineConfig cfg;
  const auto label_out = temp_dir("fast3d_eval_labels");
  run_label({sim_dir / "manifest.json"}, label_out, cfg, false);

  const auto report_dir = temp_dir("fast3d_eval_report");
  const MetricsReport report =
      run_eval(label_out / "clean" / "labels.jsonl", sim_dir / "gt.jsonl",
               sim_dir / "manifest.json", cfg.eval, report_dir);
  CHECK(report.rows.size() == 48);
  REQUIRE(std::filesystem::exists(report_dir / "report.json"));
  REQUIRE(std::filesystem::exists(report_dir / "report.txt"));

  const nlohmann::json parsed = nlohmann::json::parse(slurp(report_dir / "report.json"));
  CHECK(parsed.at("rows").size() == 48);
  CHECK(slurp(report_dir / "report.txt").find("vehicle") != std::string::npos);

  std::filesystem::remove_all(sim_dir);
  std::filesystem::remove_all(label_out);
  std::filesystem::remove_all(report_dir);
}

}  // TEST_SUITE

}  // namespace
}  // namespace fast3d
