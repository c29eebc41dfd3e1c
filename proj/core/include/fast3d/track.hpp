// Copyright (c) 2026 fast3d contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "fast3d/detection.hpp"
#include "fast3d/geometry.hpp"

#include <optional>
#include <vector>

namespace fast3d {

enum class StateSource {
  DetectionAssigned,     // a detector box was matched at this frame
  FlowPredicted,         // coasted forward on the flow estimate
  BackwardExtrapolated,  // prepended by backward completion
};

/// One frame of a track. Frames are positions in the processed sequence
/// (0-based, consecutive within a track). `mean_flow` is the gated motion
/// estimate from this frame to the next, in meters per frame (world axes);
/// it stays empty on the last state and wherever no estimate existed.
struct TrackState {
  int frame{0};
  OrientedBox box;  // world frame
  StateSource source{StateSource::DetectionAssigned};
  std::optional<Vec3> mean_flow;
  int point_count{0};
  /// The raw matched detection (world frame), kept for refinement: dimension
  /// correction reads detection dims and support counts, not the fused box.
  std::optional<Detection> detection;
};

struct Track {
  int id{0};
  ObjectClass cls{ObjectClass::Vehicle};
  std::vector<TrackState> states;  // consecutive frames, never empty once born
  double confidence{0.0};          // updated on every assignment, else kept
  int assigned_detection_count{0};
  bool terminated{false};

  int first_frame() const { return states.front().frame; }
  int last_frame() const { return states.back().frame; }
  std::size_t length() const { return states.size(); }

  /// Most recent non-empty mean_flow, scanning backwards; empty for tracks
  /// that never had a flow estimate.
  std::optional<Vec3> last_mean_flow() const {
    for (auto it = states.rbegin(); it != states.rend(); ++it) {
      if (it->mean_flow) return it->mean_flow;
    }
    return std::nullopt;
  }
};

}  // namespace fast3d
