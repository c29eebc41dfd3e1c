// Copyright (c) 2026 fast3d contributors
// SPDX-License-Identifier: Apache-2.0
//
// Metric-space primitives: point clouds, oriented boxes, rigid poses, and the
// box queries (containment, BEV/3D IoU) the rest of the pipeline is built on.
//
// Conventions, used everywhere without further comment:
//   * right-handed frame, +z up; headings rotate about +z, zero along +x,
//     and are normalized to (-pi, pi]
//   * box dims are (length, width, height): length along the heading axis
//   * containment is closed-set: points on a face count as inside
//   * all coordinates are metric (meters)

#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <vector>

namespace fast3d {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Cloud in some metric frame. Intensity is optional; when present it is
/// index-aligned with points (enforced by the IO layer, not here).
struct PointCloud {
  std::vector<Vec3> points;
  std::vector<float> intensity;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
};

/// 7-DoF oriented box.
struct OrientedBox {
  Vec3 center{Vec3::Zero()};
  Vec3 dims{Vec3::Ones()};  // (l, w, h), all > 0 for a valid box
  double heading{0.0};      // radians, (-pi, pi]

  double length() const { return dims.x(); }
  double width() const { return dims.y(); }
  double height() const { return dims.z(); }
  double bev_area() const { return dims.x() * dims.y(); }
  double volume() const { return dims.x() * dims.y() * dims.z(); }
};

/// Throws std::invalid_argument unless all dims are positive and finite and
/// the heading lies in (-pi, pi].
void validate_box(const OrientedBox& box);

/// Rigid transform p -> rotation * p + translation.
struct RigidPose {
  Mat3 rotation{Mat3::Identity()};
  Vec3 translation{Vec3::Zero()};

  static RigidPose from_yaw(double yaw, const Vec3& t = Vec3::Zero());

  Vec3 apply(const Vec3& p) const { return rotation * p + translation; }
  Vec3 rotate(const Vec3& v) const { return rotation * v; }

  /// Inverse transform; composing with it recovers the identity.
  RigidPose inverse() const;

  /// this ∘ other: applies `other` first.
  RigidPose compose(const RigidPose& other) const;

  /// Rotation about +z implied by the rotation matrix.
  double yaw() const;

  /// True when rotation * rotation^T == I and det == +1 within tol.
  bool is_orthonormal(double tol = 1e-9) const;
};

/// Wraps into (-pi, pi].
double normalize_angle(double a);

/// Smallest absolute difference between two angles, in [0, pi].
double angular_difference(double a, double b);

/// Mean of angles under given nonnegative weights, on the unit circle.
/// Falls back to the first angle when the weighted resultant vanishes.
double circular_mean(const std::vector<double>& angles,
                     const std::vector<double>& weights);

/// The 8 corners. Order: bottom face z = -h/2 counter-clockwise seen from
/// above starting at local (+l/2, +w/2), then the top face in the same xy
/// order (indices 4..7).
std::array<Vec3, 8> box_corners(const OrientedBox& box);

/// BEV footprint, counter-clockwise, same xy order as box_corners.
std::array<Vec2, 4> box_corners_bev(const OrientedBox& box);

/// Closed-set containment test against the top `vertical_fraction` of the
/// box: a point at local height z is inside iff z >= h/2 - fraction * h.
/// fraction 1 is the whole box. fraction outside (0, 1] throws.
bool point_in_box(const OrientedBox& box, const Vec3& p,
                  double vertical_fraction = 1.0);

/// Indices of cloud points inside the box, ascending.
std::vector<std::size_t> points_in_box(const OrientedBox& box,
                                       const PointCloud& cloud,
                                       double vertical_fraction = 1.0);

std::size_t count_points_in_box(const OrientedBox& box,
                                const PointCloud& cloud,
                                double vertical_fraction = 1.0);

/// Bird's-eye-view IoU of the two rotated footprints, in [0, 1].
/// Intersections with area below 1e-9 m^2 count as empty.
double iou_bev(const OrientedBox& a, const OrientedBox& b);

/// Volumetric IoU: BEV intersection times vertical overlap.
double iou_3d(const OrientedBox& a, const OrientedBox& b);

/// Rotates center and heading, keeps dims. The pose rotation must be
/// orthonormal (throws std::invalid_argument otherwise); the heading is
/// advanced by the pose's yaw, so strongly tilted poses are a caller error.
OrientedBox transform_box(const RigidPose& pose, const OrientedBox& box);

/// Applies the pose to every point; intensity is carried through.
PointCloud transform_cloud(const RigidPose& pose, const PointCloud& cloud);

/// Scales center and dims about the frame origin by s > 0 (throws otherwise).
/// Heading is unchanged.
OrientedBox scale_box(const OrientedBox& box, double s);

/// Scales every point about the frame origin by s > 0 (throws otherwise).
PointCloud scale_cloud(const PointCloud& cloud, double s);

}  // namespace fast3d
