// Copyright (c) 2026 fast3d contributors
// SPDX-License-Identifier: Apache-2.0

#include "fast3d/scenario.hpp"

#include "fast3d/errors.hpp"
#include "fast3d/geometry.hpp"
#include "fast3d/preprocess.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <set>
#include <stdexcept>
#include <tuple>

namespace fast3d {
namespace {

using nlohmann::json;
using Kind = DatasetError::Kind;

// Boxes float this far above the ground plane, so ground returns never land
// inside a ground-truth box.
constexpr double kGroundClearance = 0.3;

int resolve_last_frame(const ObjectSpec& obj, int duration) {
  return obj.last_frame < 0 ? duration - 1 : obj.last_frame;
}

bool alive_at(const ObjectSpec& obj, int frame, int duration) {
  return frame >= obj.first_frame && frame <= resolve_last_frame(obj, duration);
}

double object_heading(const ObjectSpec& obj) {
  if (obj.heading) return normalize_angle(*obj.heading);
  for (const TrajectorySegment& seg : obj.segments) {
    if (seg.velocity_mps.head<2>().norm() > 0.0) {
      return std::atan2(seg.velocity_mps.y(), seg.velocity_mps.x());
    }
  }
  return 0.0;
}

// Trajectories are discrete and globally defined: stepping from frame k to
// k+1 applies the velocity of the segment active at k. Per-point flow is
// therefore exactly the center displacement, which is what makes this
// generator an oracle for flow arithmetic.
std::vector<Vec3> object_centers(const ObjectSpec& obj, int duration, double frame_rate) {
  const Vec3 start(obj.start_xy.x(), obj.start_xy.y(),
                   kGroundClearance + obj.dims.z() / 2.0);
  std::vector<Vec3> centers;
  centers.reserve(static_cast<std::size_t>(duration));
  centers.push_back(start);
  std::size_t seg = 0;
  Vec3 velocity = Vec3::Zero();
  for (int k = 0; k + 1 < duration; ++k) {
    while (seg < obj.segments.size() && obj.segments[seg].start_frame <= k) {
      velocity = obj.segments[seg].velocity_mps;
      ++seg;
    }
    centers.push_back(centers.back() + velocity / frame_rate);
  }
  return centers;
}

RigidPose ego_pose(const EgoSpec& ego, int frame, double frame_rate) {
  const double t = frame / frame_rate;
  return RigidPose::from_yaw(ego.start_yaw + ego.yaw_rate_rps * t,
                             ego.start + ego.velocity_mps * t);
}

// Five faces, no underside; counts proportional to area with at least one
// point per face.
std::vector<Vec3> sample_surface(const Vec3& dims, double density, std::mt19937_64& rng) {
  const double l = dims.x();
  const double w = dims.y();
  const double h = dims.z();
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  auto face_count = [&](double area) {
    return std::max<std::int64_t>(1, std::llround(area * density));
  };
  std::vector<Vec3> points;
  for (const double sx : {1.0, -1.0}) {
    for (std::int64_t i = 0, n = face_count(w * h); i < n; ++i) {
      points.emplace_back(sx * l / 2.0, u(rng) * w, u(rng) * h);
    }
  }
  for (const double sy : {1.0, -1.0}) {
    for (std::int64_t i = 0, n = face_count(l * h); i < n; ++i) {
      points.emplace_back(u(rng) * l, sy * w / 2.0, u(rng) * h);
    }
  }
  for (std::int64_t i = 0, n = face_count(l * w); i < n; ++i) {
    points.emplace_back(u(rng) * l, u(rng) * w, h / 2.0);
  }
  return points;
}

bool point_visible(const Vec3& sensor_point, const ScenarioSpec& spec) {
  return in_fov(sensor_point, spec.fov_half_angle_deg) &&
         sensor_point.head<2>().norm() <= spec.max_range_m;
}

double logistic_score(double count, const ScoreModel& model) {
  const double raw = 1.0 / (1.0 + std::exp(-(count - model.midpoint_points) / model.scale_points));
  return std::clamp(raw, model.min_score, model.max_score);
}

Vec3 typical_dims(ObjectClass cls) {
  switch (cls) {
    case ObjectClass::Vehicle: return {4.5, 2.0, 1.6};
    case ObjectClass::Pedestrian: return {0.8, 0.8, 1.7};
    case ObjectClass::Cyclist: return {1.8, 0.8, 1.6};
  }
  return {1.0, 1.0, 1.0};
}

}  // namespace

void ScenarioSpec::validate() const {
  if (duration_frames < 1) throw std::invalid_argument("duration_frames must be at least 1");
  if (!(frame_rate_hz > 0.0)) throw std::invalid_argument("frame_rate_hz must be positive");
  if (ground_density_per_m2 < 0.0 || ground_margin_m < 0.0) {
    throw std::invalid_argument("ground density and margin must be non-negative");
  }
  if (!(fov_half_angle_deg > 0.0) || fov_half_angle_deg > 180.0) {
    throw std::invalid_argument("fov_half_angle_deg must lie in (0, 180]");
  }
  if (!(max_range_m > 0.0)) throw std::invalid_argument("max_range_m must be positive");
  if (detection_scales.empty()) throw std::invalid_argument("detection_scales must not be empty");
  for (std::size_t i = 0; i < detection_scales.size(); ++i) {
    if (!(detection_scales[i] > 0.0)) {
      throw std::invalid_argument("detection scales must be positive");
    }
    if (i > 0 && detection_scales[i] <= detection_scales[i - 1]) {
      throw std::invalid_argument("detection scales must be strictly ascending");
    }
  }
  if (noise.dropout < 0.0 || noise.dropout > 1.0) {
    throw std::invalid_argument("dropout must lie in [0, 1]");
  }
  if (noise.center_sigma_m < 0.0 || noise.dim_sigma_m < 0.0 ||
      noise.heading_sigma_rad < 0.0 || noise.flow_sigma_m < 0.0 || noise.clutter_rate < 0.0) {
    throw std::invalid_argument("noise magnitudes must be non-negative");
  }
  if (!(noise.score.scale_points > 0.0)) {
    throw std::invalid_argument("score scale_points must be positive");
  }
  if (noise.score.min_score < 0.0 || noise.score.max_score > 1.0 ||
      noise.score.min_score > noise.score.max_score) {
    throw std::invalid_argument("score clip range must satisfy 0 <= min <= max <= 1");
  }
  if (noise.clutter_min_score < 0.0 || noise.clutter_max_score > 1.0 ||
      noise.clutter_min_score > noise.clutter_max_score) {
    throw std::invalid_argument("clutter score range must satisfy 0 <= min <= max <= 1");
  }
  for (const ObjectSpec& obj : objects) {
    if (!(obj.dims.x() > 0.0) || !(obj.dims.y() > 0.0) || !(obj.dims.z() > 0.0)) {
      throw std::invalid_argument("object dims must be positive");
    }
    if (obj.point_density_per_m2 < 0.0) {
      throw std::invalid_argument("point density must be non-negative");
    }
    if (obj.first_frame < 0 || obj.first_frame >= duration_frames) {
      throw std::invalid_argument("first_frame must lie within the scenario");
    }
    const int last = resolve_last_frame(obj, duration_frames);
    if (last < obj.first_frame || last >= duration_frames) {
      throw std::invalid_argument("last_frame must lie within the scenario, after first_frame");
    }
    for (std::size_t i = 0; i < obj.segments.size(); ++i) {
      if (obj.segments[i].start_frame < 0) {
        throw std::invalid_argument("segment start_frame must be non-negative");
      }
      if (i > 0 && obj.segments[i].start_frame <= obj.segments[i - 1].start_frame) {
        throw std::invalid_argument("segments must have strictly ascending start frames");
      }
    }
  }
}

ScenarioData generate_scenario(const ScenarioSpec& spec, std::uint64_t seed) {
  spec.validate();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);

  // All geometry is sampled up front in one fixed order: each object's
  // surface and per-point intensities, then the ground carpet. Frames only
  // transform these samples, so a seed pins the whole dataset.
  const std::size_t n_objects = spec.objects.size();
  std::vector<std::vector<Vec3>> local_points(n_objects);
  std::vector<std::vector<float>> object_intensity(n_objects);
  std::vector<std::vector<Vec3>> centers(n_objects);
  std::vector<double> headings(n_objects);
  for (std::size_t o = 0; o < n_objects; ++o) {
    local_points[o] =
        sample_surface(spec.objects[o].dims, spec.objects[o].point_density_per_m2, rng);
    object_intensity[o].reserve(local_points[o].size());
    for (std::size_t i = 0; i < local_points[o].size(); ++i) {
      object_intensity[o].push_back(static_cast<float>(u01(rng)));
    }
    centers[o] = object_centers(spec.objects[o], spec.duration_frames, spec.frame_rate_hz);
    headings[o] = object_heading(spec.objects[o]);
  }

  // Ground carpet: a static rectangle covering every ego and object position
  // plus the margin.
  double min_x = spec.ego.start.x();
  double max_x = spec.ego.start.x();
  double min_y = spec.ego.start.y();
  double max_y = spec.ego.start.y();
  for (int n = 0; n < spec.duration_frames; ++n) {
    const RigidPose pose = ego_pose(spec.ego, n, spec.frame_rate_hz);
    min_x = std::min(min_x, pose.translation.x());
    max_x = std::max(max_x, pose.translation.x());
    min_y = std::min(min_y, pose.translation.y());
    max_y = std::max(max_y, pose.translation.y());
    for (std::size_t o = 0; o < n_objects; ++o) {
      min_x = std::min(min_x, centers[o][static_cast<std::size_t>(n)].x());
      max_x = std::max(max_x, centers[o][static_cast<std::size_t>(n)].x());
      min_y = std::min(min_y, centers[o][static_cast<std::size_t>(n)].y());
      max_y = std::max(max_y, centers[o][static_cast<std::size_t>(n)].y());
    }
  }
  min_x -= spec.ground_margin_m;
  max_x += spec.ground_margin_m;
  min_y -= spec.ground_margin_m;
  max_y += spec.ground_margin_m;
  const double area = (max_x - min_x) * (max_y - min_y);
  const auto n_ground =
      static_cast<std::size_t>(std::max<std::int64_t>(0, std::llround(area * spec.ground_density_per_m2)));
  std::vector<Vec3> ground;
  std::vector<float> ground_intensity;
  ground.reserve(n_ground);
  ground_intensity.reserve(n_ground);
  for (std::size_t i = 0; i < n_ground; ++i) {
    ground.emplace_back(min_x + u01(rng) * (max_x - min_x),
                        min_y + u01(rng) * (max_y - min_y), 0.0);
    ground_intensity.push_back(static_cast<float>(u01(rng)));
  }

  ScenarioData data;
  data.dataset.sequence_id = spec.sequence_id;
  data.dataset.frame_rate = spec.frame_rate_hz;
  data.gt.objects.resize(n_objects);
  for (std::size_t o = 0; o < n_objects; ++o) {
    data.gt.objects[o].id = static_cast<int>(o);
    data.gt.objects[o].cls = spec.objects[o].cls;
    data.gt.objects[o].dims = spec.objects[o].dims;
    data.gt.objects[o].box_by_frame.resize(static_cast<std::size_t>(spec.duration_frames));
    data.gt.objects[o].visible.assign(static_cast<std::size_t>(spec.duration_frames), false);
  }

  std::normal_distribution<double> gauss(0.0, 1.0);
  struct PointSource {
    int object;  // -1 for ground
    std::size_t index;
  };

  for (int n = 0; n < spec.duration_frames; ++n) {
    FrameRecord frame;
    frame.index = n;
    frame.timestamp = n / spec.frame_rate_hz;
    frame.pose = ego_pose(spec.ego, n, spec.frame_rate_hz);
    const RigidPose inv = frame.pose.inverse();

    std::vector<PointSource> sources;
    for (std::size_t i = 0; i < ground.size(); ++i) {
      const Vec3 s = inv.apply(ground[i]);
      if (!point_visible(s, spec)) continue;
      frame.cloud.points.push_back(s);
      frame.cloud.intensity.push_back(ground_intensity[i]);
      sources.push_back({-1, i});
    }
    for (std::size_t o = 0; o < n_objects; ++o) {
      const ObjectSpec& obj = spec.objects[o];
      if (!alive_at(obj, n, spec.duration_frames)) continue;
      const Vec3& center = centers[o][static_cast<std::size_t>(n)];
      const Mat3 rot = RigidPose::from_yaw(headings[o]).rotation;
      bool any_visible = false;
      for (std::size_t i = 0; i < local_points[o].size(); ++i) {
        const Vec3 world = rot * local_points[o][i] + center;
        const Vec3 s = inv.apply(world);
        if (!point_visible(s, spec)) continue;
        frame.cloud.points.push_back(s);
        frame.cloud.intensity.push_back(object_intensity[o][i]);
        sources.push_back({static_cast<int>(o), i});
        any_visible = true;
      }
      OrientedBox box;
      box.center = center;
      box.dims = obj.dims;
      box.heading = headings[o];
      data.gt.objects[o].box_by_frame[static_cast<std::size_t>(n)] = box;
      data.gt.objects[o].visible[static_cast<std::size_t>(n)] = any_visible;
    }

    // Flow is the true world displacement of each point, rotated into the
    // sensor frame, plus isotropic noise. Ground never moves; object points
    // move with their (translation-only) box.
    auto displacement = [&](const PointSource& src, int to_frame) -> Vec3 {
      if (src.object < 0) return Vec3::Zero();
      const auto& c = centers[static_cast<std::size_t>(src.object)];
      return c[static_cast<std::size_t>(to_frame)] - c[static_cast<std::size_t>(n)];
    };
    if (n + 1 < spec.duration_frames) {
      FlowField fwd;
      fwd.direction = FlowDirection::Forward;
      fwd.vectors.reserve(sources.size());
      for (const PointSource& src : sources) {
        Vec3 v = inv.rotate(displacement(src, n + 1));
        if (spec.noise.flow_sigma_m > 0.0) {
          v += spec.noise.flow_sigma_m * Vec3(gauss(rng), gauss(rng), gauss(rng));
        }
        fwd.vectors.push_back(v);
      }
      frame.forward_flow = std::move(fwd);
    }
    if (spec.emit_backward_flow && n > 0) {
      FlowField bwd;
      bwd.direction = FlowDirection::Backward;
      bwd.vectors.reserve(sources.size());
      for (const PointSource& src : sources) {
        Vec3 v = inv.rotate(displacement(src, n - 1));
        if (spec.noise.flow_sigma_m > 0.0) {
          v += spec.noise.flow_sigma_m * Vec3(gauss(rng), gauss(rng), gauss(rng));
        }
        bwd.vectors.push_back(v);
      }
      frame.backward_flow = std::move(bwd);
    }
    data.dataset.frames.push_back(std::move(frame));
  }
  return data;
}

void simulate_detections(SequenceDataset& dataset, const GroundTruth& gt,
                         const ScenarioSpec& spec, std::uint64_t seed) {
  spec.validate();
  for (const GroundTruthObject& obj : gt.objects) {
    if (obj.box_by_frame.size() != dataset.frames.size()) {
      throw std::invalid_argument("ground truth does not cover the dataset frames");
    }
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::poisson_distribution<int> clutter_count(
      spec.noise.clutter_rate > 0.0 ? spec.noise.clutter_rate : 1.0);

  for (std::size_t f = 0; f < dataset.frames.size(); ++f) {
    FrameRecord& frame = dataset.frames[f];
    const RigidPose inv = frame.pose.inverse();
    std::vector<Detection> base;

    for (const GroundTruthObject& obj : gt.objects) {
      if (!obj.visible[f]) continue;
      if (spec.noise.dropout > 0.0 && u01(rng) < spec.noise.dropout) continue;
      const OrientedBox sensor_box = transform_box(inv, *obj.box_by_frame[f]);
      // The score sees the true box; the emitted geometry gets the noise.
      const auto support = count_points_in_box(sensor_box, frame.cloud);
      OrientedBox noised = sensor_box;
      if (spec.noise.center_sigma_m > 0.0) {
        noised.center += spec.noise.center_sigma_m * Vec3(gauss(rng), gauss(rng), gauss(rng));
      }
      if (spec.noise.dim_sigma_m > 0.0) {
        noised.dims += spec.noise.dim_sigma_m * Vec3(gauss(rng), gauss(rng), gauss(rng));
        noised.dims = noised.dims.cwiseMax(0.1);
      }
      if (spec.noise.heading_sigma_rad > 0.0) {
        noised.heading = normalize_angle(noised.heading + spec.noise.heading_sigma_rad * gauss(rng));
      }
      Detection det;
      det.frame = frame.index;
      det.cls = obj.cls;
      det.box = noised;
      det.score = logistic_score(static_cast<double>(support), spec.noise.score);
      det.point_count = static_cast<int>(support);
      base.push_back(det);
    }

    if (spec.noise.clutter_rate > 0.0) {
      const int extras = clutter_count(rng);
      for (int i = 0; i < extras; ++i) {
        const auto cls = kAllClasses[static_cast<std::size_t>(
            std::uniform_int_distribution<int>(0, 2)(rng))];
        Vec3 dims = typical_dims(cls);
        if (spec.noise.dim_sigma_m > 0.0) {
          dims += spec.noise.dim_sigma_m * Vec3(gauss(rng), gauss(rng), gauss(rng));
          dims = dims.cwiseMax(0.1);
        }
        const double azimuth = (2.0 * u01(rng) - 1.0) * spec.fov_half_angle_deg * M_PI / 180.0;
        const double range = 5.0 + u01(rng) * (0.9 * spec.max_range_m - 5.0);
        Detection det;
        det.frame = frame.index;
        det.cls = cls;
        det.box.center = Vec3(range * std::cos(azimuth), range * std::sin(azimuth),
                              kGroundClearance + dims.z() / 2.0 - frame.pose.translation.z());
        det.box.dims = dims;
        det.box.heading = normalize_angle((2.0 * u01(rng) - 1.0) * M_PI);
        det.score = spec.noise.clutter_min_score +
                    u01(rng) * (spec.noise.clutter_max_score - spec.noise.clutter_min_score);
        base.push_back(det);
      }
    }

    frame.detections.clear();
    for (const double scale : spec.detection_scales) {
      DetectionSet set;
      set.frame = frame.index;
      set.detections.reserve(base.size());
      for (const Detection& det : base) {
        Detection scaled = det;
        scaled.box = scale_box(det.box, scale);
        set.detections.push_back(scaled);
      }
      frame.detections.emplace(scale, std::move(set));
    }
  }
}

std::vector<PseudoLabel> ground_truth_labels(const GroundTruth& gt) {
  std::vector<PseudoLabel> labels;
  for (const GroundTruthObject& obj : gt.objects) {
    for (std::size_t n = 0; n < obj.box_by_frame.size(); ++n) {
      if (!obj.visible[n] || !obj.box_by_frame[n]) continue;
      PseudoLabel label;
      label.frame = static_cast<int>(n);
      label.cls = obj.cls;
      label.box = *obj.box_by_frame[n];
      label.score = 1.0;
      label.track_id = obj.id;
      labels.push_back(std::move(label));
    }
  }
  std::sort(labels.begin(), labels.end(), [](const PseudoLabel& a, const PseudoLabel& b) {
    return std::tie(a.frame, a.track_id) < std::tie(b.frame, b.track_id);
  });
  return labels;
}

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& known,
                    const std::filesystem::path& path, const char* what) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!known.contains(key)) {
      throw DatasetError(Kind::Parse,
                         path.string() + ": unknown " + what + " key '" + key + "'");
    }
  }
}

Vec3 vec3_from(const json& j, const std::filesystem::path& path, const char* what) {
  if (!j.is_array() || j.size() != 3) {
    throw DatasetError(Kind::Parse, path.string() + ": '" + what + "' must be [x, y, z]");
  }
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

Vec2 vec2_from(const json& j, const std::filesystem::path& path, const char* what) {
  if (!j.is_array() || j.size() != 2) {
    throw DatasetError(Kind::Parse, path.string() + ": '" + what + "' must be [x, y]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

json vec3_to(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

}  // namespace

ScenarioSpec read_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DatasetError(Kind::MissingFile, "cannot open scenario file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DatasetError(Kind::Parse, path.string() + ": " + e.what());
  }
  if (!j.is_object()) throw DatasetError(Kind::Parse, path.string() + ": expected an object");

  reject_unknown(j,
                 {"sequence_id", "duration_frames", "frame_rate_hz", "ego", "objects", "noise",
                  "ground_density_per_m2", "ground_margin_m", "fov_half_angle_deg",
                  "max_range_m", "detection_scales", "emit_backward_flow"},
                 path, "scenario");
  ScenarioSpec spec;
  if (j.contains("sequence_id")) spec.sequence_id = j["sequence_id"].get<std::string>();
  if (j.contains("duration_frames")) spec.duration_frames = j["duration_frames"].get<int>();
  if (j.contains("frame_rate_hz")) spec.frame_rate_hz = j["frame_rate_hz"].get<double>();
  if (j.contains("ground_density_per_m2")) {
    spec.ground_density_per_m2 = j["ground_density_per_m2"].get<double>();
  }
  if (j.contains("ground_margin_m")) spec.ground_margin_m = j["ground_margin_m"].get<double>();
  if (j.contains("fov_half_angle_deg")) {
    spec.fov_half_angle_deg = j["fov_half_angle_deg"].get<double>();
  }
  if (j.contains("max_range_m")) spec.max_range_m = j["max_range_m"].get<double>();
  if (j.contains("detection_scales")) {
    spec.detection_scales = j["detection_scales"].get<std::vector<double>>();
  }
  if (j.contains("emit_backward_flow")) {
    spec.emit_backward_flow = j["emit_backward_flow"].get<bool>();
  }

  if (j.contains("ego")) {
    const json& e = j["ego"];
    reject_unknown(e, {"start", "velocity_mps", "start_yaw", "yaw_rate_rps"}, path, "ego");
    if (e.contains("start")) spec.ego.start = vec3_from(e["start"], path, "start");
    if (e.contains("velocity_mps")) {
      spec.ego.velocity_mps = vec3_from(e["velocity_mps"], path, "velocity_mps");
    }
    if (e.contains("start_yaw")) spec.ego.start_yaw = e["start_yaw"].get<double>();
    if (e.contains("yaw_rate_rps")) spec.ego.yaw_rate_rps = e["yaw_rate_rps"].get<double>();
  }

  if (j.contains("noise")) {
    const json& n = j["noise"];
    reject_unknown(n,
                   {"dropout", "center_sigma_m", "dim_sigma_m", "heading_sigma_rad",
                    "flow_sigma_m", "clutter_rate", "score", "clutter_min_score",
                    "clutter_max_score"},
                   path, "noise");
    if (n.contains("dropout")) spec.noise.dropout = n["dropout"].get<double>();
    if (n.contains("center_sigma_m")) spec.noise.center_sigma_m = n["center_sigma_m"].get<double>();
    if (n.contains("dim_sigma_m")) spec.noise.dim_sigma_m = n["dim_sigma_m"].get<double>();
    if (n.contains("heading_sigma_rad")) {
      spec.noise.heading_sigma_rad = n["heading_sigma_rad"].get<double>();
    }
    if (n.contains("flow_sigma_m")) spec.noise.flow_sigma_m = n["flow_sigma_m"].get<double>();
    if (n.contains("clutter_rate")) spec.noise.clutter_rate = n["clutter_rate"].get<double>();
    if (n.contains("clutter_min_score")) {
      spec.noise.clutter_min_score = n["clutter_min_score"].get<double>();
    }
    if (n.contains("clutter_max_score")) {
      spec.noise.clutter_max_score = n["clutter_max_score"].get<double>();
    }
    if (n.contains("score")) {
      const json& s = n["score"];
      reject_unknown(s, {"midpoint_points", "scale_points", "min_score", "max_score"}, path,
                     "score");
      if (s.contains("midpoint_points")) {
        spec.noise.score.midpoint_points = s["midpoint_points"].get<double>();
      }
      if (s.contains("scale_points")) {
        spec.noise.score.scale_points = s["scale_points"].get<double>();
      }
      if (s.contains("min_score")) spec.noise.score.min_score = s["min_score"].get<double>();
      if (s.contains("max_score")) spec.noise.score.max_score = s["max_score"].get<double>();
    }
  }

  if (j.contains("objects")) {
    if (!j["objects"].is_array()) {
      throw DatasetError(Kind::Parse, path.string() + ": 'objects' must be an array");
    }
    for (const json& oj : j["objects"]) {
      reject_unknown(oj,
                     {"class", "dims", "start_xy", "heading", "segments",
                      "point_density_per_m2", "first_frame", "last_frame"},
                     path, "object");
      ObjectSpec obj;
      if (oj.contains("class")) {
        const auto cls = object_class_from_string(oj["class"].get<std::string>());
        if (!cls) {
          throw DatasetError(Kind::Parse, path.string() + ": unknown class '" +
                                              oj["class"].get<std::string>() + "'");
        }
        obj.cls = *cls;
      }
      if (oj.contains("dims")) obj.dims = vec3_from(oj["dims"], path, "dims");
      if (oj.contains("start_xy")) obj.start_xy = vec2_from(oj["start_xy"], path, "start_xy");
      if (oj.contains("heading")) obj.heading = oj["heading"].get<double>();
      if (oj.contains("point_density_per_m2")) {
        obj.point_density_per_m2 = oj["point_density_per_m2"].get<double>();
      }
      if (oj.contains("first_frame")) obj.first_frame = oj["first_frame"].get<int>();
      if (oj.contains("last_frame")) obj.last_frame = oj["last_frame"].get<int>();
      if (oj.contains("segments")) {
        for (const json& sj : oj["segments"]) {
          reject_unknown(sj, {"start_frame", "velocity_mps"}, path, "segment");
          TrajectorySegment seg;
          if (sj.contains("start_frame")) seg.start_frame = sj["start_frame"].get<int>();
          if (sj.contains("velocity_mps")) {
            seg.velocity_mps = vec3_from(sj["velocity_mps"], path, "velocity_mps");
          }
          obj.segments.push_back(seg);
        }
      }
      spec.objects.push_back(std::move(obj));
    }
  }
  return spec;
}

void write_scenario(const std::filesystem::path& path, const ScenarioSpec& spec) {
  json j;
  j["sequence_id"] = spec.sequence_id;
  j["duration_frames"] = spec.duration_frames;
  j["frame_rate_hz"] = spec.frame_rate_hz;
  j["ego"] = {{"start", vec3_to(spec.ego.start)},
              {"velocity_mps", vec3_to(spec.ego.velocity_mps)},
              {"start_yaw", spec.ego.start_yaw},
              {"yaw_rate_rps", spec.ego.yaw_rate_rps}};
  j["objects"] = json::array();
  for (const ObjectSpec& obj : spec.objects) {
    json oj;
    oj["class"] = to_string(obj.cls);
    oj["dims"] = vec3_to(obj.dims);
    oj["start_xy"] = json::array({obj.start_xy.x(), obj.start_xy.y()});
    if (obj.heading) oj["heading"] = *obj.heading;
    oj["segments"] = json::array();
    for (const TrajectorySegment& seg : obj.segments) {
      oj["segments"].push_back(
          {{"start_frame", seg.start_frame}, {"velocity_mps", vec3_to(seg.velocity_mps)}});
    }
    oj["point_density_per_m2"] = obj.point_density_per_m2;
    oj["first_frame"] = obj.first_frame;
    oj["last_frame"] = obj.last_frame;
    j["objects"].push_back(std::move(oj));
  }
  j["noise"] = {{"dropout", spec.noise.dropout},
                {"center_sigma_m", spec.noise.center_sigma_m},
                {"dim_sigma_m", spec.noise.dim_sigma_m},
                {"heading_sigma_rad", spec.noise.heading_sigma_rad},
                {"flow_sigma_m", spec.noise.flow_sigma_m},
                {"clutter_rate", spec.noise.clutter_rate},
                {"score",
                 {{"midpoint_points", spec.noise.score.midpoint_points},
                  {"scale_points", spec.noise.score.scale_points},
                  {"min_score", spec.noise.score.min_score},
                  {"max_score", spec.noise.score.max_score}}},
                {"clutter_min_score", spec.noise.clutter_min_score},
                {"clutter_max_score", spec.noise.clutter_max_score}};
  j["ground_density_per_m2"] = spec.ground_density_per_m2;
  j["ground_margin_m"] = spec.ground_margin_m;
  j["fov_half_angle_deg"] = spec.fov_half_angle_deg;
  j["max_range_m"] = spec.max_range_m;
  j["detection_scales"] = spec.detection_scales;
  j["emit_backward_flow"] = spec.emit_backward_flow;

  std::ofstream out(path);
  if (!out) throw DatasetError(Kind::MissingFile, "cannot write scenario file " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace fast3d
