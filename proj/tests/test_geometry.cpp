// Copyright (c) 2026 fast3d contributors
// SPDX-License-Identifier: Apache-2.0

#include <fast3d/geometry.hpp>

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"

using namespace fast3d;

namespace {

constexpr double kPi = std::numbers::pi;

OrientedBox make_box(double cx, double cy, double cz, double l, double w, double h,
                     double heading) {
  OrientedBox b;
  b.center = {cx, cy, cz};
  b.dims = {l, w, h};
  b.heading = heading;
  return b;
}

OrientedBox random_box(std::mt19937_64& rng, double span = 10.0) {
  std::uniform_real_distribution<double> pos(-span, span);
  std::uniform_real_distribution<double> dim(0.5, 6.0);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  return make_box(pos(rng), pos(rng), 0.3 * pos(rng), dim(rng), dim(rng), dim(rng),
                  normalize_angle(ang(rng)));
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("normalize_angle maps into (-pi, pi] and is stable there") {
  CHECK(normalize_angle(3.0 * kPi / 2.0) == doctest::Approx(-kPi / 2.0));
  CHECK(normalize_angle(-kPi) == doctest::Approx(kPi));
  CHECK(normalize_angle(kPi) == doctest::Approx(kPi));
  CHECK(normalize_angle(0.0) == 0.0);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int i = 0; i < 2000; ++i) {
    const double a = u(rng);
    const double n = normalize_angle(a);
    CHECK(n > -kPi);
    CHECK(n <= kPi);
    CHECK(normalize_angle(n) == doctest::Approx(n).epsilon(1e-12));
    // Same point on the circle.
    CHECK(std::cos(n) == doctest::Approx(std::cos(a)).epsilon(1e-9));
    CHECK(std::sin(n) == doctest::Approx(std::sin(a)).epsilon(1e-9));
  }
}

TEST_CASE("angular_difference is a symmetric metric on the circle") {
  CHECK(angular_difference(0.1, 2.0 * kPi - 0.1) == doctest::Approx(0.2));
  CHECK(angular_difference(kPi, -kPi) == doctest::Approx(0.0));

  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-20.0, 20.0);
  for (int i = 0; i < 2000; ++i) {
    const double a = u(rng);
    const double b = u(rng);
    const double d = angular_difference(a, b);
    CHECK(d >= 0.0);
    CHECK(d <= kPi + 1e-12);
    CHECK(d == doctest::Approx(angular_difference(b, a)));
    CHECK(angular_difference(a + 2.0 * kPi, b) == doctest::Approx(d).epsilon(1e-9));
  }
}

TEST_CASE("circular_mean handles wrap-around and weights") {
  CHECK(circular_mean({0.2, -0.2}, {1.0, 1.0}) == doctest::Approx(0.0));
  // Two angles straddling the pi seam average to pi, not 0.
  CHECK(circular_mean({kPi - 0.1, -kPi + 0.1}, {1.0, 1.0}) == doctest::Approx(kPi));
  // All weight on one side.
  CHECK(circular_mean({0.5, 2.0}, {1.0, 0.0}) == doctest::Approx(0.5));
  CHECK_THROWS_AS(circular_mean({}, {}), std::invalid_argument);
  CHECK_THROWS_AS(circular_mean({0.0}, {-1.0}), std::invalid_argument);
}

TEST_CASE("box_corners matches a hand-rotated example") {
  // Box at (1,2,0), l=4 w=2 h=1, heading pi/2: length axis points along +y.
  const OrientedBox box = make_box(1.0, 2.0, 0.0, 4.0, 2.0, 1.0, kPi / 2.0);
  const auto c = box_corners(box);
  // Worked by hand: local (+2,+1)->(0,4), (-2,+1)->(0,0), (-2,-1)->(2,0), (+2,-1)->(2,4).
  CHECK(c[0].x() == doctest::Approx(0.0));
  CHECK(c[0].y() == doctest::Approx(4.0));
  CHECK(c[1].x() == doctest::Approx(0.0));
  CHECK(c[1].y() == doctest::Approx(0.0));
  CHECK(c[2].x() == doctest::Approx(2.0));
  CHECK(c[2].y() == doctest::Approx(0.0));
  CHECK(c[3].x() == doctest::Approx(2.0));
  CHECK(c[3].y() == doctest::Approx(4.0));
  for (int i = 0; i < 4; ++i) {
    CHECK(c[static_cast<std::size_t>(i)].z() == doctest::Approx(-0.5));
    CHECK(c[static_cast<std::size_t>(i + 4)].z() == doctest::Approx(0.5));
    CHECK(c[static_cast<std::size_t>(i)].x() ==
          doctest::Approx(c[static_cast<std::size_t>(i + 4)].x()));
  }
}

TEST_CASE("containment is closed-set and respects the vertical fraction") {
  const OrientedBox box = make_box(0, 0, 0, 2, 2, 2, 0.0);
  CHECK(point_in_box(box, {1.0, 0.0, 0.0}));       // on a face
  CHECK(point_in_box(box, {1.0, 1.0, 1.0}));       // on a corner
  CHECK_FALSE(point_in_box(box, {1.0 + 1e-9, 0.0, 0.0}));

  // Point at 10% of the box height is outside the top 70%.
  const OrientedBox tall = make_box(0, 0, 0, 2, 2, 1.0, 0.0);
  const Vec3 low{0.0, 0.0, -0.4};  // local height 10%
  CHECK(point_in_box(tall, low, 1.0));
  CHECK_FALSE(point_in_box(tall, low, 0.7));
  // Exactly at the cut plane (dyadic fraction, so the plane is exact): kept.
  CHECK(point_in_box(tall, {0.0, 0.0, -0.25}, 0.75));

  CHECK_THROWS_AS(point_in_box(box, {0, 0, 0}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(point_in_box(box, {0, 0, 0}, 1.5), std::invalid_argument);
}

TEST_CASE("points_in_box agrees with the projection oracle on random data") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-8.0, 8.0);
  for (int trial = 0; trial < 50; ++trial) {
    const OrientedBox box = random_box(rng, 4.0);
    PointCloud cloud;
    for (int i = 0; i < 400; ++i) cloud.points.push_back({u(rng), u(rng), u(rng)});
    const auto got = points_in_box(box, cloud);
    std::vector<std::size_t> expected;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      if (oracles::point_in_box_projection(box, cloud.points[i])) expected.push_back(i);
    }
    CHECK(got == expected);
  }
}

TEST_CASE("iou_bev on hand-computable pairs") {
  const OrientedBox a = make_box(0, 0, 0, 2, 2, 1, 0.0);
  SUBCASE("offset square: 1/3") {
    const OrientedBox b = make_box(1, 0, 0, 2, 2, 1, 0.0);
    CHECK(iou_bev(a, b) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  }
  SUBCASE("identical: exactly 1") {
    const OrientedBox r = make_box(3, -2, 1, 4.2, 1.7, 1.5, 0.77);
    CHECK(iou_bev(r, r) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("disjoint and edge-touching: 0") {
    CHECK(iou_bev(a, make_box(10, 0, 0, 2, 2, 1, 0.0)) == 0.0);
    CHECK(iou_bev(a, make_box(2, 0, 0, 2, 2, 1, 0.0)) == 0.0);  // shared edge
  }
  SUBCASE("45-degree rotation about the same center: sqrt(2)/2") {
    const OrientedBox sq = make_box(0, 0, 0, 1, 1, 1, 0.0);
    const OrientedBox rot = make_box(0, 0, 0, 1, 1, 1, kPi / 4.0);
    // Octagon intersection 2(sqrt(2)-1); IoU reduces to sqrt(2)/2.
    CHECK(iou_bev(sq, rot) == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-9));
  }
  SUBCASE("full containment") {
    const OrientedBox small = make_box(0, 0, 0, 1, 1, 1, kPi / 4.0);
    const OrientedBox big = make_box(0, 0, 0, 4, 4, 1, 0.0);
    CHECK(iou_bev(small, big) == doctest::Approx(1.0 / 16.0).epsilon(1e-9));
  }
}

TEST_CASE("iou_3d on hand-computable pairs") {
  const OrientedBox a = make_box(0, 0, 0, 1, 1, 1, 0.0);
  SUBCASE("unit cubes offset 0.5 vertically: 1/3") {
    const OrientedBox b = make_box(0, 0, 0.5, 1, 1, 1, 0.0);
    CHECK(iou_3d(a, b) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  }
  SUBCASE("identical: 1, stacked: 0") {
    CHECK(iou_3d(a, a) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(iou_3d(a, make_box(0, 0, 1.0, 1, 1, 1, 0.0)) == 0.0);
  }
}

TEST_CASE("iou agrees with the Monte-Carlo oracle on structured pairs") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> jitter(-1.5, 1.5);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  for (int trial = 0; trial < 10; ++trial) {
    const OrientedBox a = random_box(rng, 3.0);
    OrientedBox b = a;
    b.center += Vec3{jitter(rng), jitter(rng), 0.4 * jitter(rng)};
    b.heading = normalize_angle(a.heading + 0.3 * ang(rng));
    const auto seed = static_cast<std::uint64_t>(1000 + trial);
    CHECK(std::abs(iou_3d(a, b) - oracles::mc_iou_3d(a, b, seed, 400000)) < 0.01);
    CHECK(std::abs(iou_bev(a, b) - oracles::mc_iou_bev(a, b, seed + 7, 400000)) < 0.01);
  }
}

TEST_CASE("iou is symmetric, bounded, and invariant under planar rigid motion") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  for (int trial = 0; trial < 300; ++trial) {
    const OrientedBox a = random_box(rng);
    OrientedBox b = random_box(rng);
    if (trial % 2 == 0) b.center = a.center + Vec3{u(rng) * 0.2, u(rng) * 0.2, u(rng) * 0.1};
    const double bev = iou_bev(a, b);
    const double vol = iou_3d(a, b);
    CHECK(bev >= 0.0);
    CHECK(bev <= 1.0 + 1e-12);
    CHECK(vol >= 0.0);
    CHECK(vol <= 1.0 + 1e-12);
    CHECK(iou_bev(b, a) == doctest::Approx(bev).epsilon(1e-9));
    CHECK(iou_3d(b, a) == doctest::Approx(vol).epsilon(1e-9));
    // 3D can only shrink relative to BEV (vertical overlap factor <= 1).
    CHECK(vol <= bev + 1e-9);

    const RigidPose motion = RigidPose::from_yaw(ang(rng), {u(rng), u(rng), u(rng)});
    const OrientedBox ta = transform_box(motion, a);
    const OrientedBox tb = transform_box(motion, b);
    CHECK(std::abs(iou_bev(ta, tb) - bev) < 1e-6);
    CHECK(std::abs(iou_3d(ta, tb) - vol) < 1e-6);
  }
}

TEST_CASE("rigid poses compose, invert, and reject bad rotations") {
  const RigidPose p = RigidPose::from_yaw(0.7, {1.0, -2.0, 3.0});
  const RigidPose q = RigidPose::from_yaw(-1.2, {0.5, 0.0, -1.0});
  const Vec3 x{2.0, 3.0, -1.0};
  CHECK((p.compose(q).apply(x) - p.apply(q.apply(x))).norm() < 1e-12);
  CHECK((p.inverse().apply(p.apply(x)) - x).norm() < 1e-12);
  CHECK(p.yaw() == doctest::Approx(0.7));
  CHECK(p.is_orthonormal());

  RigidPose bad;
  bad.rotation(0, 0) = 2.0;
  CHECK_FALSE(bad.is_orthonormal());
  CHECK_THROWS_AS(transform_box(bad, OrientedBox{}), std::invalid_argument);
  CHECK_THROWS_AS(transform_cloud(bad, PointCloud{}), std::invalid_argument);
}

TEST_CASE("transform_box rotates center and advances heading") {
  const OrientedBox box = make_box(1, 0, 0, 4, 2, 1.5, 0.2);
  const RigidPose pose = RigidPose::from_yaw(kPi / 2.0, {0, 0, 10});
  const OrientedBox out = transform_box(pose, box);
  CHECK(out.center.x() == doctest::Approx(0.0));
  CHECK(out.center.y() == doctest::Approx(1.0));
  CHECK(out.center.z() == doctest::Approx(10.0));
  CHECK(out.heading == doctest::Approx(normalize_angle(0.2 + kPi / 2.0)));
  CHECK(out.dims == box.dims);

  // Identity is a no-op.
  const OrientedBox same = transform_box(RigidPose{}, box);
  CHECK((same.center - box.center).norm() == 0.0);
  CHECK(same.heading == box.heading);
}

TEST_CASE("scaling acts about the origin and round-trips") {
  const OrientedBox box = make_box(10, 5, 0, 4, 2, 1.5, 0.3);
  const OrientedBox s = scale_box(box, 0.8);
  CHECK(s.center.x() == doctest::Approx(8.0));
  CHECK(s.center.y() == doctest::Approx(4.0));
  CHECK(s.center.z() == doctest::Approx(0.0));
  CHECK(s.dims.x() == doctest::Approx(3.2));
  CHECK(s.dims.y() == doctest::Approx(1.6));
  CHECK(s.dims.z() == doctest::Approx(1.2));
  CHECK(s.heading == box.heading);

  const OrientedBox back = scale_box(s, 1.0 / 0.8);
  CHECK((back.center - box.center).norm() < 1e-12);
  CHECK((back.dims - box.dims).norm() < 1e-12);

  PointCloud cloud;
  cloud.points = {{1, 2, 3}, {-4, 0, 2}};
  cloud.intensity = {0.5f, 0.25f};
  const PointCloud sc = scale_cloud(cloud, 2.0);
  CHECK(sc.points[0] == Vec3{2, 4, 6});
  CHECK(sc.intensity == cloud.intensity);

  CHECK_THROWS_AS(scale_box(box, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(scale_box(box, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(scale_cloud(cloud, 0.0), std::invalid_argument);
}

TEST_CASE("transform_cloud applies the pose to every point") {
  PointCloud cloud;
  cloud.points = {{1, 0, 0}, {0, 1, 0}};
  const RigidPose pose = RigidPose::from_yaw(kPi / 2.0, {5, 0, 0});
  const PointCloud out = transform_cloud(pose, cloud);
  CHECK((out.points[0] - Vec3{5, 1, 0}).norm() < 1e-12);
  CHECK((out.points[1] - Vec3{4, 0, 0}).norm() < 1e-12);

  const PointCloud back = transform_cloud(pose.inverse(), out);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    CHECK((back.points[i] - cloud.points[i]).norm() < 1e-12);
  }
}

TEST_CASE("validate_box rejects malformed boxes") {
  CHECK_NOTHROW(validate_box(make_box(0, 0, 0, 1, 1, 1, 0.0)));
  CHECK_THROWS_AS(validate_box(make_box(0, 0, 0, 0, 1, 1, 0.0)), std::invalid_argument);
  CHECK_THROWS_AS(validate_box(make_box(0, 0, 0, 1, -2, 1, 0.0)), std::invalid_argument);
  CHECK_THROWS_AS(validate_box(make_box(0, 0, 0, 1, 1, 1, 4.0)), std::invalid_argument);
  OrientedBox nan_center = make_box(0, 0, 0, 1, 1, 1, 0.0);
  nan_center.center.x() = std::nan("");
  CHECK_THROWS_AS(validate_box(nan_center), std::invalid_argument);
}

}  // TEST_SUITE
