// Copyright (c) 2026 fast3d contributors
// SPDX-License-Identifier: Apache-2.0

#include "fast3d/tracker.hpp"

#include "fast3d/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fast3d {
namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

}  // namespace

void TrackerConfig::validate() const {
  if (!(frame_rate_hz > 0.0)) throw std::invalid_argument("frame_rate_hz must be positive");
  if (!(max_velocity_change_mps > 0.0)) {
    throw std::invalid_argument("max_velocity_change_mps must be positive");
  }
  if (!(max_orientation_change_deg > 0.0) || max_orientation_change_deg > 180.0) {
    throw std::invalid_argument("max_orientation_change_deg must lie in (0, 180]");
  }
  if (!(moving_speed_threshold_mps > 0.0)) {
    throw std::invalid_argument("moving_speed_threshold_mps must be positive");
  }
  if (!(min_assignment_iou > 0.0) || min_assignment_iou >= 1.0) {
    throw std::invalid_argument("min_assignment_iou must lie in (0, 1)");
  }
  if (!(fov_half_angle_deg > 0.0) || fov_half_angle_deg > 180.0) {
    throw std::invalid_argument("fov_half_angle_deg must lie in (0, 180]");
  }
}

std::optional<Vec3> mean_box_flow(const OrientedBox& box, const PointCloud& cloud,
                                  const FlowField& flow) {
  if (flow.vectors.size() != cloud.points.size()) {
    throw std::invalid_argument("flow field is not aligned with the cloud");
  }
  const std::vector<std::size_t> inside = points_in_box(box, cloud);
  if (inside.empty()) return std::nullopt;
  Vec3 sum = Vec3::Zero();
  for (const std::size_t i : inside) sum += flow.vectors[i];
  return sum / static_cast<double>(inside.size());
}

Vec3 gate_flow(const std::optional<Vec3>& previous, const Vec3& candidate,
               const TrackerConfig& cfg) {
  if (!previous) return candidate;
  const double dv = (candidate - *previous).norm() * cfg.frame_rate_hz;
  if (dv > cfg.max_velocity_change_mps) return *previous;
  const double prev_speed = previous->head<2>().norm() * cfg.frame_rate_hz;
  const double cand_speed = candidate.head<2>().norm() * cfg.frame_rate_hz;
  if (prev_speed > cfg.moving_speed_threshold_mps &&
      cand_speed > cfg.moving_speed_threshold_mps) {
    const double prev_dir = std::atan2(previous->y(), previous->x());
    const double cand_dir = std::atan2(candidate.y(), candidate.x());
    if (angular_difference(prev_dir, cand_dir) >= cfg.max_orientation_change_deg * kDegToRad) {
      return *previous;
    }
  }
  return candidate;
}

OrientedBox predict_box(const OrientedBox& box, const std::optional<Vec3>& mean_flow) {
  OrientedBox out = box;
  if (mean_flow) out.center += *mean_flow;
  return out;
}

OrientedBox weighted_box_update(const OrientedBox& predicted, double track_confidence,
                                const OrientedBox& detected, double detection_score,
                                const TrackerConfig& cfg) {
  if (track_confidence < 0.0 || detection_score < 0.0 ||
      track_confidence + detection_score <= 0.0) {
    throw std::invalid_argument("update weights must be non-negative with a positive sum");
  }
  const double wt = track_confidence;
  const double wb = detection_score;
  const double sum = wt + wb;
  OrientedBox out;
  out.center = (wt * predicted.center + wb * detected.center) / sum;
  out.dims = (wt * predicted.dims + wb * detected.dims) / sum;
  if (angular_difference(predicted.heading, detected.heading) <
      cfg.max_orientation_change_deg * kDegToRad) {
    out.heading = circular_mean({predicted.heading, detected.heading}, {wt, wb});
  } else {
    out.heading = predicted.heading;
  }
  return out;
}

double confidence_update(double track_confidence, double detection_score) {
  const double sum = track_confidence + detection_score;
  if (track_confidence < 0.0 || detection_score < 0.0 || sum <= 0.0) {
    throw std::invalid_argument("confidences must be non-negative with a positive sum");
  }
  return (track_confidence * track_confidence + detection_score * detection_score) / sum;
}

Track init_track(const Detection& detection, int id, int frame) {
  Track track;
  track.id = id;
  track.cls = detection.cls;
  track.confidence = detection.score;
  track.assigned_detection_count = 1;
  TrackState state;
  state.frame = frame;
  state.box = detection.box;
  state.source = StateSource::DetectionAssigned;
  state.point_count = detection.point_count;
  state.detection = detection;
  track.states.push_back(std::move(state));
  return track;
}

CostMatrix assignment_costs(std::span<const OrientedBox> predicted,
                            std::span<const ObjectClass> classes,
                            const DetectionSet& detections, const TrackerConfig& cfg) {
  if (predicted.size() != classes.size()) {
    throw std::invalid_argument("predicted boxes and classes must align");
  }
  CostMatrix m = CostMatrix::filled(static_cast<int>(predicted.size()),
                                    static_cast<int>(detections.size()),
                                    CostMatrix::kInfeasible);
  for (int r = 0; r < m.rows; ++r) {
    for (int c = 0; c < m.cols; ++c) {
      const Detection& det = detections.detections[static_cast<std::size_t>(c)];
      if (det.cls != classes[static_cast<std::size_t>(r)]) continue;
      const double iou = iou_bev(predicted[static_cast<std::size_t>(r)], det.box);
      if (iou < cfg.min_assignment_iou) continue;
      m.at(r, c) = 1.0 - iou;
    }
  }
  return m;
}

bool is_moving(const Track& track, const TrackerConfig& cfg) {
  const auto flow = track.last_mean_flow();
  if (!flow) return false;
  return flow->norm() * cfg.frame_rate_hz > cfg.moving_speed_threshold_mps;
}

bool should_terminate(const Track& track, const PointCloud& cloud, const RigidPose& pose,
                      const TrackerConfig& cfg) {
  const TrackState& state = track.states.back();
  if (is_moving(track, cfg)) {
    return count_points_in_box(state.box, cloud) == 0;
  }
  const Vec3 sensor_center = pose.inverse().apply(state.box.center);
  return !in_fov(sensor_center, cfg.fov_half_angle_deg);
}

std::vector<Track> run_tracker(std::span<const PreparedFrame> frames,
                               const TrackerConfig& cfg) {
  cfg.validate();
  std::vector<Track> tracks;
  std::vector<std::size_t> alive;
  int next_id = 0;

  auto spawn = [&](const Detection& det, int frame) {
    tracks.push_back(init_track(det, next_id++, frame));
    alive.push_back(tracks.size() - 1);
  };

  auto reap = [&](const PreparedFrame& frame, int n) {
    std::vector<std::size_t> survivors;
    survivors.reserve(alive.size());
    for (const std::size_t t : alive) {
      Track& track = tracks[t];
      if (should_terminate(track, frame.cloud, frame.pose, cfg)) {
        track.terminated = true;
        // A flow-extrapolated state earned no support at this frame; a
        // detection-assigned one stands on its detection.
        if (track.states.back().source == StateSource::FlowPredicted &&
            track.states.back().frame == n && track.states.size() > 1) {
          track.states.pop_back();
        }
      } else {
        survivors.push_back(t);
      }
    }
    alive = std::move(survivors);
  };

  if (frames.empty()) return tracks;

  for (const Detection& det : frames[0].fused.detections) spawn(det, 0);
  reap(frames[0], 0);

  for (int n = 1; n < static_cast<int>(frames.size()); ++n) {
    const PreparedFrame& prev = frames[static_cast<std::size_t>(n - 1)];
    const PreparedFrame& cur = frames[static_cast<std::size_t>(n)];

    // Motion estimates at n-1, gated against each track's history. Tracks
    // whose box holds no flow points coast on their previous estimate.
    std::vector<OrientedBox> predicted;
    std::vector<ObjectClass> classes;
    predicted.reserve(alive.size());
    classes.reserve(alive.size());
    for (const std::size_t t : alive) {
      Track& track = tracks[t];
      TrackState& last = track.states.back();
      const std::optional<Vec3> previous = track.last_mean_flow();
      std::optional<Vec3> candidate;
      if (prev.forward_flow) {
        candidate = mean_box_flow(last.box, prev.flow_cloud, *prev.forward_flow);
      }
      if (candidate) {
        last.mean_flow = gate_flow(previous, *candidate, cfg);
      } else if (previous) {
        last.mean_flow = previous;
      }
      predicted.push_back(predict_box(last.box, last.mean_flow));
      classes.push_back(track.cls);
    }

    const CostMatrix costs = assignment_costs(predicted, classes, cur.fused, cfg);
    const AssignmentResult assignment = solve_assignment(costs);

    for (std::size_t i = 0; i < alive.size(); ++i) {
      Track& track = tracks[alive[i]];
      const int col = assignment.row_to_col[i];
      TrackState state;
      state.frame = n;
      if (col >= 0) {
        const Detection& det = cur.fused.detections[static_cast<std::size_t>(col)];
        state.box = weighted_box_update(predicted[i], track.confidence, det.box, det.score, cfg);
        state.source = StateSource::DetectionAssigned;
        state.point_count = det.point_count;
        state.detection = det;
        track.confidence = confidence_update(track.confidence, det.score);
        ++track.assigned_detection_count;
      } else {
        state.box = predicted[i];
        state.source = StateSource::FlowPredicted;
        state.point_count = static_cast<int>(count_points_in_box(state.box, cur.cloud));
      }
      track.states.push_back(std::move(state));
    }

    for (std::size_t c = 0; c < cur.fused.size(); ++c) {
      if (assignment.col_to_row[c] == -1) spawn(cur.fused.detections[c], n);
    }

    reap(cur, n);
  }
  return tracks;
}

}  // namespace fast3d
