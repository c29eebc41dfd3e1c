// Copyright (c) 2026 fast3d contributors
// SPDX-License-Identifier: Apache-2.0
//
// Flow-aware multi-object tracking. Per frame: estimate each live track's
// motion from the scene flow inside its box (gated against sudden velocity
// or heading jumps), translate the box by that estimate, associate
// predictions with fused detections by BEV IoU through an optimal
// assignment, blend matched pairs by confidence, spawn tracks from unmatched
// detections, coast unmatched tracks, and terminate tracks that lost their
// support: a moving track with an empty box, a static track whose center
// left the field of view. Unassigned tracks keep their confidence; there is
// no miss limit, occlusions end only through the termination rules.

#pragma once

#include "fast3d/assignment.hpp"
#include "fast3d/dataset.hpp"
#include "fast3d/track.hpp"

#include <optional>
#include <span>
#include <vector>

namespace fast3d {

struct TrackerConfig {
  double frame_rate_hz{10.0};             // converts per-second limits to per-frame
  double max_velocity_change_mps{1.5};    // gate on flow estimate jumps
  double max_orientation_change_deg{30.0};
  double moving_speed_threshold_mps{0.8};  // moving/static split
  double min_assignment_iou{0.1};          // BEV IoU floor for association
  double fov_half_angle_deg{60.0};         // termination wedge for static tracks

  void validate() const;  // throws std::invalid_argument
};

/// One frame as the tracker and refiner consume it, everything in the world
/// frame. The full cloud answers point-count queries; the ground-removed
/// flow cloud (with index-aligned flow fields) feeds motion estimation, so
/// ground points never dilute a box's flow.
struct PreparedFrame {
  int index{0};       // frame index from the manifest, for export
  double timestamp{0.0};
  RigidPose pose;     // sensor -> world
  PointCloud cloud;   // full (FOV-cropped) cloud
  PointCloud flow_cloud;
  std::optional<FlowField> forward_flow;   // aligned with flow_cloud
  std::optional<FlowField> backward_flow;  // aligned with flow_cloud
  DetectionSet fused;  // fused detections, point_count filled
};

/// Mean flow vector over the cloud points inside the box; empty when the box
/// contains no points. Flow must be index-aligned with the cloud (throws
/// std::invalid_argument otherwise).
std::optional<Vec3> mean_box_flow(const OrientedBox& box, const PointCloud& cloud,
                                  const FlowField& flow);

/// Applies the tracker gates: the candidate is returned unless it jumps more
/// than max_velocity_change_mps from the previous estimate, or (when both
/// horizontal speeds exceed the moving threshold) turns by at least
/// max_orientation_change_deg; violations keep the previous estimate.
/// Without a previous estimate the candidate passes through.
Vec3 gate_flow(const std::optional<Vec3>& previous, const Vec3& candidate,
               const TrackerConfig& cfg);

/// Previous box translated by the flow estimate; identity when absent.
OrientedBox predict_box(const OrientedBox& box, const std::optional<Vec3>& mean_flow);

/// Confidence-weighted blend of prediction and detection: center and dims
/// are convex combinations with weights (track_confidence, detection score);
/// the heading moves to the weighted circular mean only when the two
/// headings differ by less than the orientation gate, else it keeps the
/// prediction. Weight sum must be positive.
OrientedBox weighted_box_update(const OrientedBox& predicted, double track_confidence,
                                const OrientedBox& detected, double detection_score,
                                const TrackerConfig& cfg);

/// (c_t^2 + c_b^2) / (c_t + c_b): between the mean and the max of the two,
/// so confirmations push confidence up without ever exceeding the larger.
double confidence_update(double track_confidence, double detection_score);

/// Fresh track from an unmatched detection.
Track init_track(const Detection& detection, int id, int frame);

/// BEV-IoU association costs (1 - IoU), infeasible below the IoU floor or
/// across classes. Rows follow `tracks`, columns `detections`.
CostMatrix assignment_costs(std::span<const OrientedBox> predicted,
                            std::span<const ObjectClass> classes,
                            const DetectionSet& detections, const TrackerConfig& cfg);

/// True when the track's gated speed exceeds the moving threshold.
bool is_moving(const Track& track, const TrackerConfig& cfg);

/// Termination test against the track's current state: moving tracks die
/// with an empty box, static tracks die when their center leaves the FOV
/// wedge (pose maps world back into the sensor frame).
bool should_terminate(const Track& track, const PointCloud& cloud, const RigidPose& pose,
                      const TrackerConfig& cfg);

/// Runs the tracker over a prepared sequence. Returns every track ever
/// created, in creation order; each fused detection is either matched to
/// exactly one track or spawns one. Deterministic.
std::vector<Track> run_tracker(std::span<const PreparedFrame> frames,
                               const TrackerConfig& cfg);

}  // namespace fast3d
