// Copyright (c) 2026 fast3d contributors
// SPDX-License-Identifier: Apache-2.0

#include "fast3d/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>

namespace fast3d {
namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

void require_half_angle(double half_angle_deg) {
  if (!(half_angle_deg > 0.0) || half_angle_deg > 180.0) {
    throw std::invalid_argument("FOV half angle must lie in (0, 180] degrees");
  }
}

PointCloud subset_cloud(const PointCloud& cloud, const std::vector<std::size_t>& indices) {
  PointCloud out;
  out.points.reserve(indices.size());
  if (!cloud.intensity.empty()) out.intensity.reserve(indices.size());
  for (const std::size_t i : indices) {
    out.points.push_back(cloud.points[i]);
    if (!cloud.intensity.empty()) out.intensity.push_back(cloud.intensity[i]);
  }
  return out;
}

}  // namespace

bool in_fov(const Vec3& sensor_point, double half_angle_deg) {
  require_half_angle(half_angle_deg);
  const double x = sensor_point.x();
  const double y = sensor_point.y();
  if (x == 0.0 && y == 0.0) return true;  // wedge apex
  return std::abs(std::atan2(y, x)) <= half_angle_deg * kDegToRad;
}

std::vector<std::size_t> fov_indices(const PointCloud& cloud, double half_angle_deg) {
  require_half_angle(half_angle_deg);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < cloud.points.size(); ++i) {
    if (in_fov(cloud.points[i], half_angle_deg)) out.push_back(i);
  }
  return out;
}

PointCloud crop_fov(const PointCloud& cloud, double half_angle_deg) {
  return subset_cloud(cloud, fov_indices(cloud, half_angle_deg));
}

DetectionSet crop_fov(const DetectionSet& detections, double half_angle_deg) {
  require_half_angle(half_angle_deg);
  DetectionSet out;
  out.frame = detections.frame;
  for (const Detection& det : detections.detections) {
    if (in_fov(det.box.center, half_angle_deg)) out.detections.push_back(det);
  }
  return out;
}

FrameRecord to_world(const FrameRecord& record) {
  FrameRecord out = record;
  out.cloud = transform_cloud(record.pose, record.cloud);
  for (auto* flow : {&out.forward_flow, &out.backward_flow}) {
    if (flow->has_value()) {
      for (Vec3& v : (*flow)->vectors) v = record.pose.rotate(v);
    }
  }
  for (auto& [scale, set] : out.detections) {
    (void)scale;
    for (Detection& det : set.detections) det.box = transform_box(record.pose, det.box);
  }
  return out;
}

GroundRemovalResult remove_ground(const PointCloud& cloud, const GroundRemovalParams& params,
                                  std::uint64_t seed) {
  const std::size_t n = cloud.points.size();
  if (n < 3) throw std::invalid_argument("remove_ground needs at least 3 points");
  if (!(params.distance_threshold_m > 0.0) || params.max_iterations < 1 ||
      !(params.min_inlier_ratio > 0.0) || params.min_inlier_ratio > 1.0) {
    throw std::invalid_argument("invalid ground removal parameters");
  }

  const double min_vertical = std::cos(params.max_plane_tilt_deg * kDegToRad);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);

  Plane best_plane;
  std::size_t best_inliers = 0;
  bool found = false;
  for (int iter = 0; iter < params.max_iterations; ++iter) {
    const std::size_t ia = pick(rng);
    const std::size_t ib = pick(rng);
    const std::size_t ic = pick(rng);
    if (ia == ib || ib == ic || ia == ic) continue;
    const Vec3& a = cloud.points[ia];
    Vec3 normal = (cloud.points[ib] - a).cross(cloud.points[ic] - a);
    const double len = normal.norm();
    if (len < 1e-12) continue;  // collinear sample
    normal /= len;
    if (normal.z() < 0.0) normal = -normal;
    if (normal.z() < min_vertical) continue;  // too far from horizontal
    const double offset = -normal.dot(a);
    std::size_t inliers = 0;
    for (const Vec3& p : cloud.points) {
      if (std::abs(normal.dot(p) + offset) <= params.distance_threshold_m) ++inliers;
    }
    if (inliers > best_inliers) {
      best_inliers = inliers;
      best_plane = Plane{normal, offset};
      found = true;
    }
  }

  GroundRemovalResult result;
  if (!found ||
      static_cast<double>(best_inliers) < params.min_inlier_ratio * static_cast<double>(n)) {
    result.cloud = cloud;
    result.kept.resize(n);
    std::iota(result.kept.begin(), result.kept.end(), std::size_t{0});
    return result;
  }
  result.plane = best_plane;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(best_plane.distance(cloud.points[i])) <= params.distance_threshold_m) {
      result.removed.push_back(i);
    } else {
      result.kept.push_back(i);
    }
  }
  result.cloud = subset_cloud(cloud, result.kept);
  return result;
}

std::pair<PointCloud, PointCloud> match_sizes(const PointCloud& a, const PointCloud& b,
                                              std::uint64_t seed) {
  if (a.empty() || b.empty()) throw std::invalid_argument("match_sizes needs non-empty clouds");
  if (a.size() == b.size()) return {a, b};

  const PointCloud& larger = a.size() > b.size() ? a : b;
  const std::size_t target = std::min(a.size(), b.size());

  // Partial Fisher-Yates, then restore original point order.
  std::vector<std::size_t> indices(larger.size());
  std::iota(indices.begin(), indices.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < target; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, indices.size() - 1);
    std::swap(indices[i], indices[pick(rng)]);
  }
  indices.resize(target);
  std::sort(indices.begin(), indices.end());
  PointCloud sub = subset_cloud(larger, indices);

  if (a.size() > b.size()) return {std::move(sub), b};
  return {a, std::move(sub)};
}

}  // namespace fast3d
