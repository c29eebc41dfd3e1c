// Copyright (c) 2026 fast3d contributors
// SPDX-License-Identifier: Apache-2.0

#include "fast3d/pipeline.hpp"

#include "fast3d/dataset_io.hpp"
#include "fast3d/errors.hpp"
#include "fast3d/fusion.hpp"
#include "fast3d/preprocess.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <future>
#include <map>
#include <set>
#include <stdexcept>
#include <utility>

namespace fast3d {
namespace {

using nlohmann::json;

// Frame-local RANSAC seed: cheap splitmix-style mix so neighbouring frames
// draw unrelated sample sequences from the same run seed.
std::uint64_t mix_seed(std::uint64_t seed, int frame_index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (static_cast<std::uint64_t>(frame_index) + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::optional<FlowField> subset_flow(const std::optional<FlowField>& flow,
                                     const std::vector<std::size_t>& kept) {
  if (!flow) return std::nullopt;
  FlowField out;
  out.direction = flow->direction;
  out.vectors.reserve(kept.size());
  for (const std::size_t i : kept) out.vectors.push_back(flow->vectors[i]);
  return out;
}

}  // namespace

std::vector<PreparedFrame> prepare_frames(const SequenceDataset& dataset,
                                          const PipelineConfig& config) {
  config.validate();
  validate_dataset(dataset);
  const double fov = config.tracker.fov_half_angle_deg;

  std::vector<PreparedFrame> prepared;
  prepared.reserve(dataset.frames.size());
  for (const FrameRecord& record : dataset.frames) {
    FrameRecord working = record;
    if (config.crop_fov) {
      const std::vector<std::size_t> kept = fov_indices(record.cloud, fov);
      PointCloud cropped;
      cropped.points.reserve(kept.size());
      cropped.intensity.reserve(kept.size());
      for (const std::size_t i : kept) {
        cropped.points.push_back(record.cloud.points[i]);
        cropped.intensity.push_back(record.cloud.intensity[i]);
      }
      working.cloud = std::move(cropped);
      working.forward_flow = subset_flow(record.forward_flow, kept);
      working.backward_flow = subset_flow(record.backward_flow, kept);
      for (auto& [scale, set] : working.detections) set = crop_fov(set, fov);
    }

    // Fusion happens in the sensor frame: the detector's rescaled copies are
    // all centered on the sensor origin.
    DetectionSet fused = fuse_multiscale(working.detections, config.fusion);
    fused.frame = record.index;
    working.detections.clear();
    working.detections.emplace(1.0, std::move(fused));

    const FrameRecord world = to_world(working);

    PreparedFrame frame;
    frame.index = record.index;
    frame.timestamp = record.timestamp;
    frame.pose = record.pose;
    frame.cloud = world.cloud;
    frame.fused = world.detections.at(1.0);
    for (Detection& det : frame.fused.detections) {
      det.point_count = static_cast<int>(count_points_in_box(det.box, frame.cloud));
    }

    if (config.remove_ground_points && world.cloud.size() >= 3) {
      const GroundRemovalResult ground =
          remove_ground(world.cloud, config.ground, mix_seed(config.seed, record.index));
      frame.flow_cloud = ground.cloud;
      frame.forward_flow = subset_flow(world.forward_flow, ground.kept);
      frame.backward_flow = subset_flow(world.backward_flow, ground.kept);
    } else {
      frame.flow_cloud = world.cloud;
      frame.forward_flow = world.forward_flow;
      frame.backward_flow = world.backward_flow;
    }
    prepared.push_back(std::move(frame));
  }
  return prepared;
}

LabelOutput label_sequence(const SequenceDataset& dataset, const PipelineConfig& config) {
  const std::vector<PreparedFrame> prepared = prepare_frames(dataset, config);

  TrackerConfig tracker_cfg = config.tracker;
  tracker_cfg.frame_rate_hz = dataset.frame_rate;
  tracker_cfg.validate();

  std::vector<Track> tracks = run_tracker(prepared, tracker_cfg);

  LabelOutput out;
  out.summary.sequence_id = dataset.sequence_id;
  out.summary.frames = prepared.size();
  for (const PreparedFrame& frame : prepared) {
    out.summary.fused_detections += frame.fused.size();
  }

  RefineResult refined = refine_all(std::move(tracks), prepared, tracker_cfg, config.refine);
  out.summary.refine = refined.stats;
  out.labels = tracks_to_labels(refined.tracks, prepared);
  std::stable_sort(out.labels.begin(), out.labels.end(),
                   [](const PseudoLabel& a, const PseudoLabel& b) {
                     return std::tie(a.frame, a.track_id) < std::tie(b.frame, b.track_id);
                   });
  out.summary.labels = out.labels.size();
  return out;
}

namespace {

void write_summaries(const std::filesystem::path& path,
                     const std::vector<SequenceSummary>& summaries) {
  json j = json::array();
  for (const SequenceSummary& s : summaries) {
    j.push_back({{"sequence_id", s.sequence_id},
                 {"frames", s.frames},
                 {"fused_detections", s.fused_detections},
                 {"tracks", s.refine.input_tracks},
                 {"kept", s.refine.kept},
                 {"removed", s.refine.removed},
                 {"recovered", s.refine.recovered},
                 {"backward_states", s.refine.backward_states},
                 {"labels", s.labels}});
  }
  std::ofstream out(path);
  if (!out) {
    throw DatasetError(DatasetError::Kind::MissingFile,
                       "cannot write summary " + path.string());
  }
  out << j.dump(2) << '\n';
}

SequenceSummary label_one(const std::filesystem::path& manifest,
                          const std::filesystem::path& out_dir, const PipelineConfig& config,
                          bool write_text) {
  const SequenceDataset dataset = load_sequence(manifest);
  LabelOutput output = label_sequence(dataset, config);

  const std::filesystem::path sequence_dir = out_dir / dataset.sequence_id;
  std::filesystem::create_directories(sequence_dir);
  write_labels(sequence_dir / "labels.jsonl", output.labels);

  if (write_text) {
    // The text export addresses detector re-training, which consumes boxes
    // in the frame the clouds are stored in.
    std::map<int, RigidPose> inverse_poses;
    for (const FrameRecord& record : dataset.frames) {
      inverse_poses.emplace(record.index, record.pose.inverse());
    }
    std::vector<PseudoLabel> sensor = output.labels;
    for (PseudoLabel& label : sensor) {
      label.box = transform_box(inverse_poses.at(label.frame), label.box);
    }
    write_labels_text(sequence_dir / "labels_txt", sensor);
  }
  return output.summary;
}

}  // namespace

std::vector<SequenceSummary> run_label(const std::vector<std::filesystem::path>& manifests,
                                       const std::filesystem::path& out_dir,
                                       const PipelineConfig& config, bool write_text) {
  config.validate();
  if (manifests.empty()) throw std::invalid_argument("no manifests given");
  std::filesystem::create_directories(out_dir);

  std::vector<SequenceSummary> summaries(manifests.size());
  const std::size_t jobs = static_cast<std::size_t>(config.jobs);
  for (std::size_t begin = 0; begin < manifests.size(); begin += jobs) {
    const std::size_t end = std::min(begin + jobs, manifests.size());
    std::vector<std::future<SequenceSummary>> batch;
    batch.reserve(end - begin);
    for (std::size_t i = begin; i < end; ++i) {
      batch.push_back(std::async(std::launch::async, label_one, manifests[i], out_dir,
                                 std::cref(config), write_text));
    }
    for (std::size_t i = begin; i < end; ++i) summaries[i] = batch[i - begin].get();
  }

  std::set<std::string> ids;
  for (const SequenceSummary& s : summaries) {
    if (!ids.insert(s.sequence_id).second) {
      throw std::invalid_argument("duplicate sequence id '" + s.sequence_id +
                                  "' across manifests");
    }
  }
  write_summaries(out_dir / "summary.json", summaries);
  write_pipeline_config(out_dir / "effective_config.json", config);
  return summaries;
}

SimulateSummary run_simulate(const ScenarioSpec& spec, std::uint64_t seed,
                             const std::filesystem::path& out_dir) {
  ScenarioData data = generate_scenario(spec, seed);
  // Detections draw from their own stream so scene geometry stays identical
  // when only detector noise settings change.
  simulate_detections(data.dataset, data.gt, spec, mix_seed(seed, -1));

  std::filesystem::create_directories(out_dir);
  save_sequence(data.dataset, out_dir);
  const std::vector<PseudoLabel> gt_labels = ground_truth_labels(data.gt);
  write_labels(out_dir / "gt.jsonl", gt_labels);
  write_scenario(out_dir / "scenario.json", spec);

  SimulateSummary summary;
  summary.frames = data.dataset.frames.size();
  summary.objects = data.gt.objects.size();
  summary.gt_labels = gt_labels.size();
  return summary;
}

MetricsReport run_eval(const std::filesystem::path& labels_path,
                       const std::filesystem::path& gt_path,
                       const std::filesystem::path& manifest_path, const EvalConfig& config,
                       const std::filesystem::path& out_dir) {
  config.validate();
  const std::vector<PseudoLabel> labels = read_labels(labels_path);
  const std::vector<PseudoLabel> gt = read_labels(gt_path);
  const std::map<int, RigidPose> poses = load_poses(manifest_path);

  const MetricsReport report = compute_metrics(labels, gt, poses, config);
  std::filesystem::create_directories(out_dir);
  write_report_json(out_dir / "report.json", report);
  write_report_text(out_dir / "report.txt", report);
  return report;
}

}  // namespace fast3d
