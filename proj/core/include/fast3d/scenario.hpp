// Copyright (c) 2026 fast3d contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fast3d/dataset.hpp"
#include "fast3d/labels.hpp"

namespace fast3d {

/// Synthetic sequential scenes with exact per-point flow and poses. Objects
/// are rigid boxes on translation-only trajectories, so ground truth for
/// every downstream quantity (flow means, point counts, visibility) is
/// available in closed form.

struct EgoSpec {
  Vec3 start{0.0, 0.0, 1.73};
  Vec3 velocity_mps{Vec3::Zero()};
  double start_yaw{0.0};
  double yaw_rate_rps{0.0};
};

struct TrajectorySegment {
  int start_frame{0};
  Vec3 velocity_mps{Vec3::Zero()};
};

struct ObjectSpec {
  ObjectClass cls{ObjectClass::Vehicle};
  /// Length, width, height in meters.
  Vec3 dims{4.5, 2.0, 1.6};
  /// Ground position of the box center; height follows from the clearance
  /// rule (boxes float 0.3 m above the ground plane).
  Vec2 start_xy{Vec2::Zero()};
  /// Fixed heading; defaults to the direction of the first moving segment.
  std::optional<double> heading;
  /// Piecewise constant velocity, sorted by start_frame; empty means static.
  std::vector<TrajectorySegment> segments;
  double point_density_per_m2{40.0};
  int first_frame{0};
  /// Inclusive; negative means the scenario's final frame.
  int last_frame{-1};
};

struct ScoreModel {
  /// Logistic in the number of points inside the true box.
  double midpoint_points{20.0};
  double scale_points{10.0};
  double min_score{0.5};
  double max_score{0.99};
};

struct NoiseSpec {
  double dropout{0.0};
  double center_sigma_m{0.0};
  double dim_sigma_m{0.0};
  double heading_sigma_rad{0.0};
  double flow_sigma_m{0.0};
  /// Poisson mean of false detections per frame.
  double clutter_rate{0.0};
  ScoreModel score;
  double clutter_min_score{0.5};
  double clutter_max_score{0.95};
};

struct ScenarioSpec {
  std::string sequence_id{"synthetic"};
  int duration_frames{1};
  double frame_rate_hz{10.0};
  EgoSpec ego;
  std::vector<ObjectSpec> objects;
  NoiseSpec noise;
  double ground_density_per_m2{2.0};
  /// The ground carpet extends this far beyond everything that moves.
  double ground_margin_m{10.0};
  double fov_half_angle_deg{60.0};
  double max_range_m{75.0};
  std::vector<double> detection_scales{0.8, 1.0, 1.2};
  bool emit_backward_flow{true};

  void validate() const;
};

struct GroundTruthObject {
  int id{0};
  ObjectClass cls{ObjectClass::Vehicle};
  Vec3 dims{Vec3::Zero()};
  /// World box per frame position; empty while the object does not exist.
  std::vector<std::optional<OrientedBox>> box_by_frame;
  /// True when at least one surface point falls inside the sensor wedge and
  /// range — the eligibility rule for both detection simulation and scoring.
  std::vector<bool> visible;
};

struct GroundTruth {
  std::vector<GroundTruthObject> objects;
};

struct ScenarioData {
  SequenceDataset dataset;
  GroundTruth gt;
};

/// Builds clouds, forward/backward flow, and poses for every frame.
/// Deterministic per (spec, seed); detections are simulated separately.
ScenarioData generate_scenario(const ScenarioSpec& spec, std::uint64_t seed);

/// Fills dataset.frames[].detections: each visible object is dropped with
/// the dropout probability or emitted with Gaussian box noise and a
/// point-count score; clutter boxes arrive at the Poisson rate. Every scale
/// receives a consistent scaled copy of the same underlying box.
void simulate_detections(SequenceDataset& dataset, const GroundTruth& gt,
                         const ScenarioSpec& spec, std::uint64_t seed);

/// One label per visible object-frame, score 1, track id = object id.
std::vector<PseudoLabel> ground_truth_labels(const GroundTruth& gt);

/// JSON round trip for scenario files; unknown keys are rejected.
ScenarioSpec read_scenario(const std::filesystem::path& path);
void write_scenario(const std::filesystem::path& path, const ScenarioSpec& spec);

}  // namespace fast3d
