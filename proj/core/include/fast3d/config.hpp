// Copyright (c) 2026 fast3d contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "fast3d/fusion.hpp"
#include "fast3d/metrics.hpp"
#include "fast3d/preprocess.hpp"
#include "fast3d/refine.hpp"
#include "fast3d/tracker.hpp"

#include <cstdint>
#include <filesystem>

namespace fast3d {

/// Everything the labeling pipeline needs, in one serializable bundle. Every
/// field has a working default; a config file only has to name what it
/// changes. The tracker's fov_half_angle_deg doubles as the preprocessing
/// crop wedge — it is the same physical sensor property.
struct PipelineConfig {
  /// Crop clouds, flows, and raw detections to the forward wedge before
  /// anything else sees them.
  bool crop_fov{true};
  /// Drop RANSAC ground inliers from the cloud that feeds flow estimation.
  /// Point-count queries always see the full cloud.
  bool remove_ground_points{true};
  GroundRemovalParams ground;
  FusionParams fusion;
  /// frame_rate_hz is overridden per sequence by the manifest's rate.
  TrackerConfig tracker;
  RefineConfig refine;
  EvalConfig eval;
  /// Seeds the ground-removal RANSAC; mixed with each frame index so frames
  /// stay independent yet reproducible.
  std::uint64_t seed{0};
  /// Sequences labeled in parallel.
  int jobs{1};

  void validate() const;  // throws std::invalid_argument
};

/// JSON round trip. Reading rejects unknown keys at every level and applies
/// defaults for absent ones; the result is validated. Throws DatasetError
/// for file and syntax problems, std::invalid_argument for bad values.
PipelineConfig read_pipeline_config(const std::filesystem::path& path);
void write_pipeline_config(const std::filesystem::path& path, const PipelineConfig& config);

}  // namespace fast3d
