// Copyright (c) 2026 fast3d contributors
// SPDX-License-Identifier: Apache-2.0
//
// Frame preparation: field-of-view cropping, world projection, RANSAC ground
// removal, and cloud size matching. Which cloud feeds which downstream query
// is a deliberate split: the ground-removed cloud feeds flow estimation (so
// the static carpet cannot dilute object motion), the full cloud feeds point
// count queries (detection support, termination, backward completion).

#pragma once

#include "fast3d/dataset.hpp"

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace fast3d {

/// True when the sensor-frame point lies inside the forward wedge of the
/// given half angle: |atan2(y, x)| <= half_angle. The apex (origin) counts
/// as inside. half_angle_deg must lie in (0, 180].
bool in_fov(const Vec3& sensor_point, double half_angle_deg);

/// Indices of cloud points inside the wedge, ascending.
std::vector<std::size_t> fov_indices(const PointCloud& cloud, double half_angle_deg);

/// Keeps points inside the wedge, preserving order and intensity alignment.
PointCloud crop_fov(const PointCloud& cloud, double half_angle_deg);

/// Keeps detections whose box center lies inside the wedge. Centers are
/// scale-invariant under scaling about the sensor origin, so cropping
/// commutes with rescaling.
DetectionSet crop_fov(const DetectionSet& detections, double half_angle_deg);

/// Returns the record with cloud points, flow vectors, and detection boxes
/// mapped through the record's pose (flow vectors rotate only). The pose
/// field is kept as-is to document the applied transform; feeding an
/// already-projected record back in is a caller error.
FrameRecord to_world(const FrameRecord& record);

struct GroundRemovalParams {
  double distance_threshold_m{0.2};
  int max_iterations{100};
  double min_inlier_ratio{0.15};
  double max_plane_tilt_deg{30.0};  // limit on the normal's angle from vertical
};

/// n . x + offset = 0 with |n| = 1 and n.z > 0.
struct Plane {
  Vec3 normal{0.0, 0.0, 1.0};
  double offset{0.0};

  /// Signed distance; positive above the plane.
  double distance(const Vec3& p) const { return normal.dot(p) + offset; }
};

struct GroundRemovalResult {
  PointCloud cloud;                   // points off the plane, original order
  std::vector<std::size_t> kept;      // indices into the input cloud
  std::vector<std::size_t> removed;   // complement, ascending
  std::optional<Plane> plane;         // empty when no acceptable plane found
};

/// RANSAC plane fit restricted to near-horizontal planes. When the best
/// plane's inlier ratio stays below min_inlier_ratio the cloud is returned
/// unchanged and `plane` is empty. Deterministic for a fixed seed. Throws
/// std::invalid_argument on fewer than 3 points.
GroundRemovalResult remove_ground(const PointCloud& cloud,
                                  const GroundRemovalParams& params,
                                  std::uint64_t seed);

/// Uniform subsample (without replacement, original order kept) of the
/// larger cloud so both ends up the same size. Equal sizes pass through
/// unchanged; empty inputs throw std::invalid_argument. Deterministic for a
/// fixed seed.
std::pair<PointCloud, PointCloud> match_sizes(const PointCloud& a,
                                              const PointCloud& b,
                                              std::uint64_t seed);

}  // namespace fast3d
