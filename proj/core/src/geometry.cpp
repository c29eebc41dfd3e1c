// Copyright (c) 2026 fast3d contributors
// SPDX-License-Identifier: Apache-2.0

#include "fast3d/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fast3d {
namespace {

constexpr double kPi = std::numbers::pi;

// Intersections smaller than this (m^2) are treated as empty; also the
// degeneracy floor for clipping denominators.
constexpr double kAreaEps = 1e-9;

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

// Convex polygon with enough headroom for a quad clipped by a quad
// (at most 8 vertices; 16 leaves margin for the ping-pong buffers).
struct Poly {
  std::array<Vec2, 16> v;
  int n = 0;

  void push(const Vec2& p) { v[static_cast<std::size_t>(n++)] = p; }
};

double polygon_area(const Poly& p) {
  if (p.n < 3) return 0.0;
  double twice = 0.0;
  for (int i = 0; i < p.n; ++i) {
    const Vec2& a = p.v[static_cast<std::size_t>(i)];
    const Vec2& b = p.v[static_cast<std::size_t>((i + 1) % p.n)];
    twice += cross2(a, b);
  }
  return std::abs(twice) * 0.5;
}

// Sutherland-Hodgman: clips `subject` against one directed edge a->b of a
// counter-clockwise convex clip polygon. Inside = left of the edge; points
// on the edge are kept (closed intersection).
Poly clip_edge(const Poly& subject, const Vec2& a, const Vec2& b) {
  Poly out;
  if (subject.n == 0) return out;
  const Vec2 dir = b - a;
  for (int i = 0; i < subject.n; ++i) {
    const Vec2& p = subject.v[static_cast<std::size_t>(i)];
    const Vec2& q = subject.v[static_cast<std::size_t>((i + 1) % subject.n)];
    const double side_p = cross2(dir, p - a);
    const double side_q = cross2(dir, q - a);
    const bool in_p = side_p >= 0.0;
    const bool in_q = side_q >= 0.0;
    if (in_p != in_q) {
      const double denom = side_p - side_q;
      if (std::abs(denom) > kAreaEps * kAreaEps) {
        const double t = side_p / denom;
        out.push(p + t * (q - p));
      }
    }
    if (in_q) out.push(q);
  }
  return out;
}

double convex_intersection_area(const std::array<Vec2, 4>& a,
                                const std::array<Vec2, 4>& b) {
  Poly poly;
  for (const Vec2& p : a) poly.push(p);
  for (int i = 0; i < 4 && poly.n >= 3; ++i) {
    poly = clip_edge(poly, b[static_cast<std::size_t>(i)],
                     b[static_cast<std::size_t>((i + 1) % 4)]);
  }
  return polygon_area(poly);
}

// Shared by iou_bev and iou_3d; returns 0 for sub-epsilon overlaps.
double bev_intersection(const OrientedBox& a, const OrientedBox& b) {
  const double area = convex_intersection_area(box_corners_bev(a), box_corners_bev(b));
  return area < kAreaEps ? 0.0 : area;
}

void require_positive_scale(double s) {
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw std::invalid_argument("scale factor must be positive and finite");
  }
}

void require_orthonormal(const RigidPose& pose) {
  if (!pose.is_orthonormal()) {
    throw std::invalid_argument("pose rotation is not orthonormal");
  }
}

void require_vertical_fraction(double f) {
  if (!(f > 0.0) || f > 1.0) {
    throw std::invalid_argument("vertical_fraction must lie in (0, 1]");
  }
}

}  // namespace

void validate_box(const OrientedBox& box) {
  for (int i = 0; i < 3; ++i) {
    if (!(box.dims[i] > 0.0) || !std::isfinite(box.dims[i])) {
      throw std::invalid_argument("box dims must be positive and finite");
    }
    if (!std::isfinite(box.center[i])) {
      throw std::invalid_argument("box center must be finite");
    }
  }
  if (!std::isfinite(box.heading) || box.heading <= -kPi || box.heading > kPi) {
    throw std::invalid_argument("box heading must lie in (-pi, pi]");
  }
}

RigidPose RigidPose::from_yaw(double yaw, const Vec3& t) {
  RigidPose pose;
  const double c = std::cos(yaw);
  const double s = std::sin(yaw);
  pose.rotation << c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0;
  pose.translation = t;
  return pose;
}

RigidPose RigidPose::inverse() const {
  RigidPose inv;
  inv.rotation = rotation.transpose();
  inv.translation = -(inv.rotation * translation);
  return inv;
}

RigidPose RigidPose::compose(const RigidPose& other) const {
  RigidPose out;
  out.rotation = rotation * other.rotation;
  out.translation = rotation * other.translation + translation;
  return out;
}

double RigidPose::yaw() const { return std::atan2(rotation(1, 0), rotation(0, 0)); }

bool RigidPose::is_orthonormal(double tol) const {
  const Mat3 err = rotation * rotation.transpose() - Mat3::Identity();
  return err.cwiseAbs().maxCoeff() <= tol && std::abs(rotation.determinant() - 1.0) <= tol;
}

double normalize_angle(double a) {
  if (a > -kPi && a <= kPi) return a;  // already in range, keep bit-exact
  double r = std::fmod(a + kPi, 2.0 * kPi);
  if (r <= 0.0) r += 2.0 * kPi;
  return r - kPi;
}

double angular_difference(double a, double b) {
  double d = std::fmod(std::abs(a - b), 2.0 * kPi);
  if (d > kPi) d = 2.0 * kPi - d;
  return d;
}

double circular_mean(const std::vector<double>& angles,
                     const std::vector<double>& weights) {
  if (angles.empty() || angles.size() != weights.size()) {
    throw std::invalid_argument("circular_mean needs matching non-empty inputs");
  }
  double sx = 0.0;
  double sy = 0.0;
  for (std::size_t i = 0; i < angles.size(); ++i) {
    if (weights[i] < 0.0) throw std::invalid_argument("circular_mean weights must be >= 0");
    sx += weights[i] * std::cos(angles[i]);
    sy += weights[i] * std::sin(angles[i]);
  }
  if (std::hypot(sx, sy) < 1e-12) return angles.front();
  return normalize_angle(std::atan2(sy, sx));
}

std::array<Vec3, 8> box_corners(const OrientedBox& box) {
  const double c = std::cos(box.heading);
  const double s = std::sin(box.heading);
  const double hl = 0.5 * box.dims.x();
  const double hw = 0.5 * box.dims.y();
  const double hh = 0.5 * box.dims.z();
  // Counter-clockwise from (+l/2, +w/2), bottom then top.
  const std::array<Vec2, 4> local{{{hl, hw}, {-hl, hw}, {-hl, -hw}, {hl, -hw}}};
  std::array<Vec3, 8> out;
  for (std::size_t i = 0; i < 4; ++i) {
    const double x = c * local[i].x() - s * local[i].y() + box.center.x();
    const double y = s * local[i].x() + c * local[i].y() + box.center.y();
    out[i] = {x, y, box.center.z() - hh};
    out[i + 4] = {x, y, box.center.z() + hh};
  }
  return out;
}

std::array<Vec2, 4> box_corners_bev(const OrientedBox& box) {
  const auto corners = box_corners(box);
  std::array<Vec2, 4> out;
  for (std::size_t i = 0; i < 4; ++i) out[i] = corners[i].head<2>();
  return out;
}

bool point_in_box(const OrientedBox& box, const Vec3& p, double vertical_fraction) {
  require_vertical_fraction(vertical_fraction);
  const double c = std::cos(box.heading);
  const double s = std::sin(box.heading);
  const Vec3 d = p - box.center;
  const double lx = c * d.x() + s * d.y();
  const double ly = -s * d.x() + c * d.y();
  const double lz = d.z();
  const double h = box.dims.z();
  return std::abs(lx) <= 0.5 * box.dims.x() && std::abs(ly) <= 0.5 * box.dims.y() &&
         lz <= 0.5 * h && lz >= h * (0.5 - vertical_fraction);
}

std::vector<std::size_t> points_in_box(const OrientedBox& box, const PointCloud& cloud,
                                       double vertical_fraction) {
  require_vertical_fraction(vertical_fraction);
  const double c = std::cos(box.heading);
  const double s = std::sin(box.heading);
  const double hl = 0.5 * box.dims.x();
  const double hw = 0.5 * box.dims.y();
  const double h = box.dims.z();
  const double z_lo = h * (0.5 - vertical_fraction);
  const double z_hi = 0.5 * h;
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < cloud.points.size(); ++i) {
    const Vec3 d = cloud.points[i] - box.center;
    if (d.z() > z_hi || d.z() < z_lo) continue;
    const double lx = c * d.x() + s * d.y();
    if (std::abs(lx) > hl) continue;
    const double ly = -s * d.x() + c * d.y();
    if (std::abs(ly) > hw) continue;
    out.push_back(i);
  }
  return out;
}

std::size_t count_points_in_box(const OrientedBox& box, const PointCloud& cloud,
                                double vertical_fraction) {
  return points_in_box(box, cloud, vertical_fraction).size();
}

double iou_bev(const OrientedBox& a, const OrientedBox& b) {
  const double inter = bev_intersection(a, b);
  if (inter <= 0.0) return 0.0;
  const double uni = a.bev_area() + b.bev_area() - inter;
  return uni <= kAreaEps ? 0.0 : inter / uni;
}

double iou_3d(const OrientedBox& a, const OrientedBox& b) {
  const double inter_bev = bev_intersection(a, b);
  if (inter_bev <= 0.0) return 0.0;
  const double z_lo = std::max(a.center.z() - 0.5 * a.dims.z(), b.center.z() - 0.5 * b.dims.z());
  const double z_hi = std::min(a.center.z() + 0.5 * a.dims.z(), b.center.z() + 0.5 * b.dims.z());
  const double dz = z_hi - z_lo;
  if (dz <= 0.0) return 0.0;
  const double inter = inter_bev * dz;
  const double uni = a.volume() + b.volume() - inter;
  return uni <= kAreaEps ? 0.0 : inter / uni;
}

OrientedBox transform_box(const RigidPose& pose, const OrientedBox& box) {
  require_orthonormal(pose);
  OrientedBox out = box;
  out.center = pose.apply(box.center);
  out.heading = normalize_angle(box.heading + pose.yaw());
  return out;
}

PointCloud transform_cloud(const RigidPose& pose, const PointCloud& cloud) {
  require_orthonormal(pose);
  PointCloud out;
  out.points.reserve(cloud.points.size());
  for (const Vec3& p : cloud.points) out.points.push_back(pose.apply(p));
  out.intensity = cloud.intensity;
  return out;
}

OrientedBox scale_box(const OrientedBox& box, double s) {
  require_positive_scale(s);
  OrientedBox out = box;
  out.center *= s;
  out.dims *= s;
  return out;
}

PointCloud scale_cloud(const PointCloud& cloud, double s) {
  require_positive_scale(s);
  PointCloud out;
  out.points.reserve(cloud.points.size());
  for (const Vec3& p : cloud.points) out.points.push_back(p * s);
  out.intensity = cloud.intensity;
  return out;
}

}  // namespace fast3d
