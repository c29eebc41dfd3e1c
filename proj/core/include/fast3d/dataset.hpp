// Copyright (c) 2026 fast3d contributors
// SPDX-License-Identifier: Apache-2.0
//
// In-memory model of a recorded sequence. The on-disk layout (manifest plus
// binary payloads) lives in dataset_io.hpp; preprocessing in preprocess.hpp.

#pragma once

#include "fast3d/detection.hpp"
#include "fast3d/geometry.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fast3d {

enum class FlowDirection { Forward, Backward };

/// Per-point scene flow, index-aligned with the cloud it was computed on.
/// Vectors are displacements in meters per frame: Forward points to the next
/// frame, Backward to the previous one.
struct FlowField {
  std::vector<Vec3> vectors;
  FlowDirection direction{FlowDirection::Forward};

  std::size_t size() const { return vectors.size(); }
};

/// One frame of a sequence. Cloud, flow, and detections are stored in the
/// sensor frame; `pose` maps sensor coordinates into the world frame.
/// Detections are keyed by the cloud scale they were produced on (1.0 = the
/// unscaled cloud).
struct FrameRecord {
  int index{0};
  double timestamp{0.0};
  RigidPose pose;
  PointCloud cloud;
  std::optional<FlowField> forward_flow;
  std::optional<FlowField> backward_flow;
  std::map<double, DetectionSet> detections;
};

struct SequenceDataset {
  std::string sequence_id;
  double frame_rate{10.0};  // Hz, > 0
  std::vector<FrameRecord> frames;

  std::size_t size() const { return frames.size(); }
};

/// Structural checks shared by the loader and the simulator: strictly
/// increasing frame indices, non-decreasing timestamps, positive frame rate,
/// orthonormal poses, flow/intensity lengths matching the cloud, detection
/// frame fields matching their record. Throws DatasetError.
void validate_dataset(const SequenceDataset& dataset);

}  // namespace fast3d
