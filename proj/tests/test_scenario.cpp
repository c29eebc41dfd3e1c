// Copyright (c) 2026 fast3d contributors
// SPDX-License-Identifier: Apache-2.0

#include <fast3d/errors.hpp>
#include <fast3d/geometry.hpp>
#include <fast3d/preprocess.hpp>
#include <fast3d/scenario.hpp>
#include <fast3d/tracker.hpp>

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

namespace fast3d {
namespace {

ScenarioSpec small_spec() {
  ScenarioSpec spec;
  spec.duration_frames = 6;
  spec.ground_density_per_m2 = 0.0;
  ObjectSpec obj;
  obj.start_xy = Vec2(10.0, 0.0);
  obj.point_density_per_m2 = 5.0;
  spec.objects.push_back(obj);
  return spec;
}

ObjectSpec mover(const Vec2& start, const Vec3& velocity) {
  ObjectSpec obj;
  obj.start_xy = start;
  obj.point_density_per_m2 = 5.0;
  obj.segments.push_back({0, velocity});
  return obj;
}

bool clouds_equal(const PointCloud& a, const PointCloud& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.points[i] != b.points[i] || a.intensity[i] != b.intensity[i]) return false;
  }
  return true;
}

bool flows_equal(const std::optional<FlowField>& a, const std::optional<FlowField>& b) {
  if (a.has_value() != b.has_value()) return false;
  if (!a) return true;
  if (a->vectors.size() != b->vectors.size()) return false;
  for (std::size_t i = 0; i < a->vectors.size(); ++i) {
    if (a->vectors[i] != b->vectors[i]) return false;
  }
  return true;
}

bool detections_equal(const Detection& a, const Detection& b) {
  return a.frame == b.frame && a.cls == b.cls && a.box.center == b.box.center &&
         a.box.dims == b.box.dims && a.box.heading == b.box.heading && a.score == b.score &&
         a.point_count == b.point_count;
}

std::filesystem::path temp_file(const char* name) {
  return std::filesystem::temp_directory_path() / name;
}

TEST_SUITE("scenario") {

TEST_CASE("spec validation rejects out-of-range values") {
  CHECK_NOTHROW(ScenarioSpec{}.validate());
  CHECK_NOTHROW(small_spec().validate());

  auto expect_throw = [](auto mutate) {
    ScenarioSpec spec = small_spec();
    mutate(spec);
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  };
  expect_throw([](ScenarioSpec& s) { s.duration_frames = 0; });
  expect_throw([](ScenarioSpec& s) { s.frame_rate_hz = 0.0; });
  expect_throw([](ScenarioSpec& s) { s.detection_scales.clear(); });
  expect_throw([](ScenarioSpec& s) { s.detection_scales = {1.0, 0.8}; });
  expect_throw([](ScenarioSpec& s) { s.detection_scales = {0.0}; });
  expect_throw([](ScenarioSpec& s) { s.fov_half_angle_deg = 0.0; });
  expect_throw([](ScenarioSpec& s) { s.fov_half_angle_deg = 181.0; });
  expect_throw([](ScenarioSpec& s) { s.max_range_m = 0.0; });
  expect_throw([](ScenarioSpec& s) { s.ground_density_per_m2 = -1.0; });
  expect_throw([](ScenarioSpec& s) { s.noise.dropout = -0.1; });
  expect_throw([](ScenarioSpec& s) { s.noise.dropout = 1.1; });
  expect_throw([](ScenarioSpec& s) { s.noise.clutter_rate = -2.0; });
  expect_throw([](ScenarioSpec& s) { s.noise.score.scale_points = 0.0; });
  expect_throw([](ScenarioSpec& s) { s.noise.clutter_min_score = 0.9;
                                     s.noise.clutter_max_score = 0.5; });
  expect_throw([](ScenarioSpec& s) { s.objects[0].dims.y() = 0.0; });
  expect_throw([](ScenarioSpec& s) { s.objects[0].first_frame = 6; });
  expect_throw([](ScenarioSpec& s) { s.objects[0].last_frame = 6; });
  expect_throw([](ScenarioSpec& s) { s.objects[0].first_frame = 4;
                                     s.objects[0].last_frame = 2; });
  expect_throw([](ScenarioSpec& s) { s.objects[0].segments = {{2, Vec3::Zero()},
                                                              {2, Vec3::Zero()}}; });
}

TEST_CASE("the seed pins the scene and the detections") {
  ScenarioSpec spec = small_spec();
  spec.duration_frames = 5;
  spec.ground_density_per_m2 = 0.5;
  spec.ground_margin_m = 5.0;
  spec.objects[0] = mover(Vec2(10.0, 0.0), Vec3(2.0, 0.0, 0.0));
  spec.noise.dropout = 0.2;
  spec.noise.center_sigma_m = 0.05;
  spec.noise.flow_sigma_m = 0.01;
  spec.noise.clutter_rate = 0.5;

  ScenarioData a = generate_scenario(spec, 7);
  ScenarioData b = generate_scenario(spec, 7);
  REQUIRE(a.dataset.frames.size() == b.dataset.frames.size());
  for (std::size_t f = 0; f < a.dataset.frames.size(); ++f) {
    const FrameRecord& fa = a.dataset.frames[f];
    const FrameRecord& fb = b.dataset.frames[f];
    CHECK(clouds_equal(fa.cloud, fb.cloud));
    CHECK(flows_equal(fa.forward_flow, fb.forward_flow));
    CHECK(flows_equal(fa.backward_flow, fb.backward_flow));
    CHECK(fa.pose.translation == fb.pose.translation);
    CHECK(fa.pose.rotation == fb.pose.rotation);
  }

  simulate_detections(a.dataset, a.gt, spec, 9);
  simulate_detections(b.dataset, b.gt, spec, 9);
  for (std::size_t f = 0; f < a.dataset.frames.size(); ++f) {
    const auto& da = a.dataset.frames[f].detections;
    const auto& db = b.dataset.frames[f].detections;
    REQUIRE(da.size() == db.size());
    for (const auto& [scale, set] : da) {
      REQUIRE(db.contains(scale));
      const DetectionSet& other = db.at(scale);
      REQUIRE(set.size() == other.size());
      for (std::size_t i = 0; i < set.size(); ++i) {
        CHECK(detections_equal(set.detections[i], other.detections[i]));
      }
    }
  }

  ScenarioData c = generate_scenario(spec, 8);
  REQUIRE(c.dataset.frames.size() == a.dataset.frames.size());
  CHECK_FALSE(clouds_equal(a.dataset.frames[0].cloud, c.dataset.frames[0].cloud));
}

TEST_CASE("a static scene repeats the same sensor points every frame") {
  ScenarioSpec spec = small_spec();
  ScenarioData data = generate_scenario(spec, 3);
  REQUIRE(data.dataset.frames.size() == 6);
  const PointCloud& first = data.dataset.frames[0].cloud;
  CHECK(first.size() > 10);
  for (const FrameRecord& frame : data.dataset.frames) {
    CHECK(clouds_equal(frame.cloud, first));
    if (frame.forward_flow) {
      for (const Vec3& v : frame.forward_flow->vectors) CHECK(v == Vec3::Zero());
    }
  }
}

TEST_CASE("constant velocity moves every object point by exactly v over the rate") {
  ScenarioSpec spec = small_spec();
  spec.objects[0] = mover(Vec2(10.0, 0.0), Vec3(2.0, 0.0, 0.0));
  ScenarioData data = generate_scenario(spec, 11);

  const Vec3 step(0.2, 0.0, 0.0);
  for (std::size_t f = 0; f + 1 < data.dataset.frames.size(); ++f) {
    const FrameRecord& frame = data.dataset.frames[f];
    REQUIRE(frame.forward_flow);
    REQUIRE(frame.forward_flow->size() == frame.cloud.size());
    for (const Vec3& v : frame.forward_flow->vectors) CHECK((v - step).norm() < 1e-12);

    const GroundTruthObject& obj = data.gt.objects[0];
    REQUIRE(obj.box_by_frame[f]);
    const OrientedBox sensor_box =
        transform_box(frame.pose.inverse(), *obj.box_by_frame[f]);
    const auto mean = mean_box_flow(sensor_box, frame.cloud, *frame.forward_flow);
    REQUIRE(mean);
    CHECK((*mean - step).norm() < 1e-12);
  }
  CHECK_FALSE(data.dataset.frames.back().forward_flow.has_value());
}

TEST_CASE("mean box flow carries ground truth boxes onto the next frame") {
  // A moving, turning ego watching a two-segment mover and a parked object.
  // The measured flow inside each true box must land the box exactly on the
  // next frame's ground truth, in the current sensor frame.
  ScenarioSpec spec;
  spec.duration_frames = 8;
  spec.ground_density_per_m2 = 0.3;
  spec.ground_margin_m = 5.0;
  spec.ego.velocity_mps = Vec3(1.0, 0.3, 0.0);
  spec.ego.yaw_rate_rps = 0.05;
  ObjectSpec turning = mover(Vec2(12.0, 1.0), Vec3(2.0, 0.0, 0.0));
  turning.segments.push_back({4, Vec3(0.0, 1.0, 0.0)});
  spec.objects.push_back(turning);
  ObjectSpec parked;
  parked.start_xy = Vec2(8.0, -3.0);
  parked.point_density_per_m2 = 5.0;
  spec.objects.push_back(parked);

  ScenarioData data = generate_scenario(spec, 21);
  int checked = 0;
  for (const GroundTruthObject& obj : data.gt.objects) {
    for (std::size_t f = 0; f + 1 < data.dataset.frames.size(); ++f) {
      if (!obj.visible[f] || !obj.box_by_frame[f] || !obj.box_by_frame[f + 1]) continue;
      const FrameRecord& frame = data.dataset.frames[f];
      REQUIRE(frame.forward_flow);
      const RigidPose inv = frame.pose.inverse();
      const OrientedBox sensor_box = transform_box(inv, *obj.box_by_frame[f]);
      const auto mean = mean_box_flow(sensor_box, frame.cloud, *frame.forward_flow);
      REQUIRE(mean);
      const Vec3 expected = inv.apply(obj.box_by_frame[f + 1]->center);
      CHECK((sensor_box.center + *mean - expected).norm() < 1e-9);
      ++checked;
    }
    for (std::size_t f = 1; f < data.dataset.frames.size(); ++f) {
      if (!obj.visible[f] || !obj.box_by_frame[f] || !obj.box_by_frame[f - 1]) continue;
      const FrameRecord& frame = data.dataset.frames[f];
      REQUIRE(frame.backward_flow);
      const RigidPose inv = frame.pose.inverse();
      const OrientedBox sensor_box = transform_box(inv, *obj.box_by_frame[f]);
      const auto mean = mean_box_flow(sensor_box, frame.cloud, *frame.backward_flow);
      REQUIRE(mean);
      const Vec3 expected = inv.apply(obj.box_by_frame[f - 1]->center);
      CHECK((sensor_box.center + *mean - expected).norm() < 1e-9);
    }
  }
  CHECK(checked > 10);
}

TEST_CASE("dropout thins detections at the configured rate") {
  ScenarioSpec spec;
  spec.duration_frames = 200;
  spec.ground_density_per_m2 = 0.0;
  spec.detection_scales = {1.0};
  spec.noise.dropout = 0.4;
  for (const auto& xy : {Vec2(8.0, 0.0), Vec2(12.0, 3.0), Vec2(16.0, -3.0), Vec2(20.0, 6.0),
                         Vec2(24.0, -6.0)}) {
    ObjectSpec obj;
    obj.start_xy = xy;
    obj.point_density_per_m2 = 2.0;
    spec.objects.push_back(obj);
  }

  ScenarioData data = generate_scenario(spec, 5);
  std::size_t visible = 0;
  for (const GroundTruthObject& obj : data.gt.objects) {
    for (const bool v : obj.visible) visible += v ? 1 : 0;
  }
  REQUIRE(visible == 1000);

  simulate_detections(data.dataset, data.gt, spec, 6);
  std::size_t detected = 0;
  for (const FrameRecord& frame : data.dataset.frames) {
    detected += frame.detections.at(1.0).size();
  }
  const double rate = static_cast<double>(detected) / static_cast<double>(visible);
  CHECK(rate > 0.55);
  CHECK(rate < 0.65);
}

TEST_CASE("full dropout silences true objects") {
  ScenarioSpec spec = small_spec();
  spec.noise.dropout = 1.0;
  ScenarioData data = generate_scenario(spec, 4);
  simulate_detections(data.dataset, data.gt, spec, 4);
  for (const FrameRecord& frame : data.dataset.frames) {
    for (const auto& [scale, set] : frame.detections) CHECK(set.empty());
  }
}

TEST_CASE("clutter appears without any true object") {
  ScenarioSpec spec;
  spec.duration_frames = 20;
  spec.ground_density_per_m2 = 0.1;
  spec.detection_scales = {1.0};
  spec.noise.clutter_rate = 3.0;
  ScenarioData data = generate_scenario(spec, 12);
  simulate_detections(data.dataset, data.gt, spec, 12);

  std::size_t total = 0;
  for (const FrameRecord& frame : data.dataset.frames) {
    for (const Detection& det : frame.detections.at(1.0).detections) {
      ++total;
      CHECK(det.score >= 0.5);
      CHECK(det.score <= 0.95);
      CHECK(det.box.dims.minCoeff() > 0.0);
      CHECK(det.box.center.head<2>().norm() <= 0.9 * spec.max_range_m);
      CHECK(std::abs(std::atan2(det.box.center.y(), det.box.center.x())) <=
            spec.fov_half_angle_deg * M_PI / 180.0 + 1e-9);
    }
  }
  // Poisson(3) over 20 frames.
  CHECK(total > 20);
  CHECK(total < 120);
}

TEST_CASE("noise-free detections reproduce the true boxes") {
  ScenarioSpec spec;
  spec.duration_frames = 6;
  spec.ground_density_per_m2 = 0.2;
  spec.ground_margin_m = 5.0;
  spec.ego.velocity_mps = Vec3(2.0, 0.0, 0.0);
  spec.ego.yaw_rate_rps = 0.02;
  spec.detection_scales = {1.0};
  spec.objects.push_back(mover(Vec2(15.0, 2.0), Vec3(1.0, 0.5, 0.0)));
  ObjectSpec ped;
  ped.cls = ObjectClass::Pedestrian;
  ped.dims = Vec3(0.8, 0.8, 1.7);
  ped.start_xy = Vec2(9.0, -2.0);
  ped.point_density_per_m2 = 20.0;
  spec.objects.push_back(ped);

  ScenarioData data = generate_scenario(spec, 31);
  simulate_detections(data.dataset, data.gt, spec, 31);

  for (std::size_t f = 0; f < data.dataset.frames.size(); ++f) {
    const FrameRecord& frame = data.dataset.frames[f];
    const RigidPose inv = frame.pose.inverse();
    const DetectionSet& set = frame.detections.at(1.0);
    std::size_t expected = 0;
    for (const GroundTruthObject& obj : data.gt.objects) {
      if (!obj.visible[f]) continue;
      ++expected;
      const OrientedBox truth = transform_box(inv, *obj.box_by_frame[f]);
      bool found = false;
      for (const Detection& det : set.detections) {
        if ((det.box.center - truth.center).norm() > 1e-9) continue;
        found = true;
        CHECK(det.cls == obj.cls);
        CHECK((det.box.dims - truth.dims).norm() < 1e-12);
        CHECK(angular_difference(det.box.heading, truth.heading) < 1e-12);
        CHECK(det.point_count ==
              static_cast<int>(count_points_in_box(truth, frame.cloud)));
        const double raw =
            1.0 / (1.0 + std::exp(-(det.point_count - 20.0) / 10.0));
        CHECK(std::abs(det.score - std::clamp(raw, 0.5, 0.99)) < 1e-12);
      }
      CHECK(found);
    }
    CHECK(set.size() == expected);
  }
}

TEST_CASE("objects outside the wedge or beyond range are invisible") {
  ScenarioSpec spec;
  spec.duration_frames = 3;
  spec.ground_density_per_m2 = 0.0;
  spec.detection_scales = {1.0};
  ObjectSpec behind;
  behind.start_xy = Vec2(-10.0, 0.0);
  behind.point_density_per_m2 = 5.0;
  ObjectSpec wide;
  wide.start_xy = Vec2(5.0, 57.0);  // azimuth ~85 degrees
  wide.point_density_per_m2 = 5.0;
  ObjectSpec far_away;
  far_away.start_xy = Vec2(80.0, 0.0);
  far_away.point_density_per_m2 = 5.0;
  ObjectSpec control;
  control.start_xy = Vec2(10.0, 0.0);
  control.point_density_per_m2 = 5.0;
  spec.objects = {behind, wide, far_away, control};

  ScenarioData data = generate_scenario(spec, 2);
  for (std::size_t o = 0; o < 3; ++o) {
    for (const bool v : data.gt.objects[o].visible) CHECK_FALSE(v);
  }
  for (const bool v : data.gt.objects[3].visible) CHECK(v);

  simulate_detections(data.dataset, data.gt, spec, 2);
  for (const FrameRecord& frame : data.dataset.frames) {
    REQUIRE(frame.detections.at(1.0).size() == 1);
    const Detection& det = frame.detections.at(1.0).detections[0];
    CHECK((det.box.center.head<2>() - Vec2(10.0, 0.0)).norm() < 1e-9);
  }
}

TEST_CASE("every scale repeats the base detections scaled about the origin") {
  ScenarioSpec spec = small_spec();
  spec.noise.center_sigma_m = 0.1;
  spec.noise.clutter_rate = 1.0;
  ScenarioData data = generate_scenario(spec, 17);
  simulate_detections(data.dataset, data.gt, spec, 17);

  for (const FrameRecord& frame : data.dataset.frames) {
    REQUIRE(frame.detections.size() == 3);
    const DetectionSet& base = frame.detections.at(1.0);
    for (const double scale : {0.8, 1.2}) {
      const DetectionSet& scaled = frame.detections.at(scale);
      REQUIRE(scaled.size() == base.size());
      for (std::size_t i = 0; i < base.size(); ++i) {
        const Detection& b = base.detections[i];
        const Detection& s = scaled.detections[i];
        const OrientedBox expected = scale_box(b.box, scale);
        CHECK(s.cls == b.cls);
        CHECK(s.score == b.score);
        CHECK((s.box.center - expected.center).norm() < 1e-12);
        CHECK((s.box.dims - expected.dims).norm() < 1e-12);
        CHECK(s.box.heading == expected.heading);
      }
    }
  }
}

TEST_CASE("backward flow mirrors the previous displacement") {
  ScenarioSpec spec = small_spec();
  spec.objects[0] = mover(Vec2(10.0, 0.0), Vec3(2.0, 0.0, 0.0));

  SUBCASE("emitted by default") {
    ScenarioData data = generate_scenario(spec, 13);
    CHECK_FALSE(data.dataset.frames[0].backward_flow.has_value());
    for (std::size_t f = 1; f < data.dataset.frames.size(); ++f) {
      const FrameRecord& frame = data.dataset.frames[f];
      REQUIRE(frame.backward_flow);
      REQUIRE(frame.backward_flow->size() == frame.cloud.size());
      CHECK(frame.backward_flow->direction == FlowDirection::Backward);
      for (const Vec3& v : frame.backward_flow->vectors) {
        CHECK((v - Vec3(-0.2, 0.0, 0.0)).norm() < 1e-12);
      }
    }
  }
  SUBCASE("suppressed on request") {
    spec.emit_backward_flow = false;
    ScenarioData data = generate_scenario(spec, 13);
    for (const FrameRecord& frame : data.dataset.frames) {
      CHECK_FALSE(frame.backward_flow.has_value());
    }
  }
}

TEST_CASE("the ground carpet lies at height zero inside the margin") {
  ScenarioSpec spec;
  spec.duration_frames = 1;
  spec.ground_density_per_m2 = 2.0;
  spec.ground_margin_m = 10.0;
  ScenarioData data = generate_scenario(spec, 19);
  const FrameRecord& frame = data.dataset.frames[0];
  CHECK(frame.cloud.size() > 50);
  CHECK(frame.cloud.size() <= 800);
  for (const Vec3& p : frame.cloud.points) {
    CHECK(p.z() == -1.73);  // sensor height over flat ground
    const Vec3 world = frame.pose.apply(p);
    CHECK(world.z() == 0.0);
    CHECK(std::abs(world.x()) <= 10.0 + 1e-12);
    CHECK(std::abs(world.y()) <= 10.0 + 1e-12);
    CHECK(in_fov(p, spec.fov_half_angle_deg));
  }
}

TEST_CASE("ground truth labels cover exactly the visible object frames") {
  ScenarioSpec spec = small_spec();
  spec.objects.push_back(mover(Vec2(20.0, 3.0), Vec3(0.0, -1.0, 0.0)));
  spec.objects[1].first_frame = 2;
  spec.objects[1].cls = ObjectClass::Cyclist;
  spec.objects[1].dims = Vec3(1.8, 0.8, 1.6);
  ScenarioData data = generate_scenario(spec, 23);

  const std::vector<PseudoLabel> labels = ground_truth_labels(data.gt);
  std::size_t visible = 0;
  for (const GroundTruthObject& obj : data.gt.objects) {
    for (const bool v : obj.visible) visible += v ? 1 : 0;
  }
  CHECK(labels.size() == visible);
  for (std::size_t i = 1; i < labels.size(); ++i) {
    const bool ordered = labels[i - 1].frame < labels[i].frame ||
                         (labels[i - 1].frame == labels[i].frame &&
                          labels[i - 1].track_id < labels[i].track_id);
    CHECK(ordered);
  }
  for (const PseudoLabel& label : labels) {
    CHECK(label.score == 1.0);
    const GroundTruthObject& obj = data.gt.objects[static_cast<std::size_t>(label.track_id)];
    CHECK(label.cls == obj.cls);
    const OrientedBox& box = *obj.box_by_frame[static_cast<std::size_t>(label.frame)];
    CHECK((label.box.center - box.center).norm() == 0.0);
  }
  // The late starter contributes no labels before its first frame.
  for (const PseudoLabel& label : labels) {
    if (label.track_id == 1) CHECK(label.frame >= 2);
  }
}

TEST_CASE("scenario files round trip") {
  ScenarioSpec spec;
  spec.sequence_id = "roundtrip";
  spec.duration_frames = 42;
  spec.frame_rate_hz = 5.0;
  spec.ego.start = Vec3(1.0, 2.0, 1.6);
  spec.ego.velocity_mps = Vec3(3.0, 0.1, 0.0);
  spec.ego.start_yaw = 0.2;
  spec.ego.yaw_rate_rps = -0.01;
  spec.ground_density_per_m2 = 1.5;
  spec.ground_margin_m = 12.0;
  spec.fov_half_angle_deg = 45.0;
  spec.max_range_m = 60.0;
  spec.detection_scales = {0.5, 1.5};
  spec.emit_backward_flow = false;
  spec.noise.dropout = 0.25;
  spec.noise.center_sigma_m = 0.07;
  spec.noise.dim_sigma_m = 0.02;
  spec.noise.heading_sigma_rad = 0.03;
  spec.noise.flow_sigma_m = 0.015;
  spec.noise.clutter_rate = 0.75;
  spec.noise.clutter_min_score = 0.4;
  spec.noise.clutter_max_score = 0.8;
  spec.noise.score.midpoint_points = 25.0;
  spec.noise.score.scale_points = 8.0;
  spec.noise.score.min_score = 0.3;
  spec.noise.score.max_score = 0.97;
  ObjectSpec obj = mover(Vec2(14.0, -1.0), Vec3(1.0, 0.0, 0.0));
  obj.cls = ObjectClass::Cyclist;
  obj.dims = Vec3(1.8, 0.8, 1.6);
  obj.heading = 0.5;
  obj.segments.push_back({10, Vec3(0.0, 2.0, 0.0)});
  obj.point_density_per_m2 = 12.0;
  obj.first_frame = 3;
  obj.last_frame = 30;
  spec.objects.push_back(obj);
  spec.objects.push_back(ObjectSpec{});  // all defaults, no heading override

  const auto path = temp_file("fast3d_scenario_roundtrip.json");
  write_scenario(path, spec);
  const ScenarioSpec back = read_scenario(path);

  CHECK(back.sequence_id == spec.sequence_id);
  CHECK(back.duration_frames == spec.duration_frames);
  CHECK(back.frame_rate_hz == spec.frame_rate_hz);
  CHECK(back.ego.start == spec.ego.start);
  CHECK(back.ego.velocity_mps == spec.ego.velocity_mps);
  CHECK(back.ego.start_yaw == spec.ego.start_yaw);
  CHECK(back.ego.yaw_rate_rps == spec.ego.yaw_rate_rps);
  CHECK(back.ground_density_per_m2 == spec.ground_density_per_m2);
  CHECK(back.ground_margin_m == spec.ground_margin_m);
  CHECK(back.fov_half_angle_deg == spec.fov_half_angle_deg);
  CHECK(back.max_range_m == spec.max_range_m);
  CHECK(back.detection_scales == spec.detection_scales);
  CHECK(back.emit_backward_flow == spec.emit_backward_flow);
  CHECK(back.noise.dropout == spec.noise.dropout);
  CHECK(back.noise.center_sigma_m == spec.noise.center_sigma_m);
  CHECK(back.noise.dim_sigma_m == spec.noise.dim_sigma_m);
  CHECK(back.noise.heading_sigma_rad == spec.noise.heading_sigma_rad);
  CHECK(back.noise.flow_sigma_m == spec.noise.flow_sigma_m);
  CHECK(back.noise.clutter_rate == spec.noise.clutter_rate);
  CHECK(back.noise.clutter_min_score == spec.noise.clutter_min_score);
  CHECK(back.noise.clutter_max_score == spec.noise.clutter_max_score);
  CHECK(back.noise.score.midpoint_points == spec.noise.score.midpoint_points);
  CHECK(back.noise.score.scale_points == spec.noise.score.scale_points);
  CHECK(back.noise.score.min_score == spec.noise.score.min_score);
  CHECK(back.noise.score.max_score == spec.noise.score.max_score);
  REQUIRE(back.objects.size() == 2);
  CHECK(back.objects[0].cls == ObjectClass::Cyclist);
  CHECK(back.objects[0].dims == spec.objects[0].dims);
  CHECK(back.objects[0].start_xy == spec.objects[0].start_xy);
  REQUIRE(back.objects[0].heading.has_value());
  CHECK(*back.objects[0].heading == 0.5);
  REQUIRE(back.objects[0].segments.size() == 2);
  CHECK(back.objects[0].segments[1].start_frame == 10);
  CHECK(back.objects[0].segments[1].velocity_mps == Vec3(0.0, 2.0, 0.0));
  CHECK(back.objects[0].point_density_per_m2 == 12.0);
  CHECK(back.objects[0].first_frame == 3);
  CHECK(back.objects[0].last_frame == 30);
  CHECK_FALSE(back.objects[1].heading.has_value());
  CHECK(back.objects[1].segments.empty());

  std::filesystem::remove(path);
}

TEST_CASE("scenario files reject unknown keys and missing files") {
  CHECK_THROWS_AS(read_scenario("/nonexistent/scenario.json"), DatasetError);

  const auto path = temp_file("fast3d_scenario_bad.json");
  {
    std::ofstream out(path);
    out << R"({"duration_frames": 3, "speling": 1})";
  }
  CHECK_THROWS_AS(read_scenario(path), DatasetError);
  {
    std::ofstream out(path);
    out << R"({"noise": {"dropout": 0.1, "sigma": 2}})";
  }
  CHECK_THROWS_AS(read_scenario(path), DatasetError);
  {
    std::ofstream out(path);
    out << R"({"objects": [{"class": "vehicle", "speed": 3}]})";
  }
  CHECK_THROWS_AS(read_scenario(path), DatasetError);
  {
    std::ofstream out(path);
    out << R"({"objects": [{"class": "boat"}]})";
  }
  CHECK_THROWS_AS(read_scenario(path), DatasetError);
  {
    std::ofstream out(path);
    out << "not json";
  }
  CHECK_THROWS_AS(read_scenario(path), DatasetError);
  std::filesystem::remove(path);
}

}  // TEST_SUITE

}  // namespace
}  // namespace fast3d
