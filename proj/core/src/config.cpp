// Copyright (c) 2026 fast3d contributors
// SPDX-License-Identifier: Apache-2.0

#include "fast3d/config.hpp"

#include "fast3d/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <stdexcept>
#include <string>

namespace fast3d {
namespace {

using nlohmann::json;
using Kind = DatasetError::Kind;

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

template <typename T>
void get_if_present(const json& obj, const char* key, T& out) {
  if (obj.contains(key)) out = obj.at(key).get<T>();
}

void read_ground(const json& j, GroundRemovalParams& g, const std::filesystem::path& path) {
  reject_unknown(j, {"distance_threshold_m", "max_iterations", "min_inlier_ratio",
                     "max_plane_tilt_deg"},
                 path, "ground");
  get_if_present(j, "distance_threshold_m", g.distance_threshold_m);
  get_if_present(j, "max_iterations", g.max_iterations);
  get_if_present(j, "min_inlier_ratio", g.min_inlier_ratio);
  get_if_present(j, "max_plane_tilt_deg", g.max_plane_tilt_deg);
}

void read_fusion(const json& j, FusionParams& f, const std::filesystem::path& path) {
  reject_unknown(j, {"scales", "score_threshold", "nms_iou", "class_aware"}, path, "fusion");
  get_if_present(j, "scales", f.scales);
  get_if_present(j, "score_threshold", f.score_threshold);
  get_if_present(j, "nms_iou", f.nms_iou);
  get_if_present(j, "class_aware", f.class_aware);
}

void read_tracker(const json& j, TrackerConfig& t, const std::filesystem::path& path) {
  reject_unknown(j,
                 {"frame_rate_hz", "max_velocity_change_mps", "max_orientation_change_deg",
                  "moving_speed_threshold_mps", "min_assignment_iou", "fov_half_angle_deg"},
                 path, "tracker");
  get_if_present(j, "frame_rate_hz", t.frame_rate_hz);
  get_if_present(j, "max_velocity_change_mps", t.max_velocity_change_mps);
  get_if_present(j, "max_orientation_change_deg", t.max_orientation_change_deg);
  get_if_present(j, "moving_speed_threshold_mps", t.moving_speed_threshold_mps);
  get_if_present(j, "min_assignment_iou", t.min_assignment_iou);
  get_if_present(j, "fov_half_angle_deg", t.fov_half_angle_deg);
}

void read_refine(const json& j, RefineConfig& r, const std::filesystem::path& path) {
  reject_unknown(j,
                 {"min_hit_ratio", "min_track_length_s", "min_max_point_count",
                  "recovery_min_iou", "backward_vertical_fraction", "dims_top_k"},
                 path, "refine");
  get_if_present(j, "min_hit_ratio", r.min_hit_ratio);
  get_if_present(j, "min_track_length_s", r.min_track_length_s);
  get_if_present(j, "min_max_point_count", r.min_max_point_count);
  get_if_present(j, "recovery_min_iou", r.recovery_min_iou);
  get_if_present(j, "backward_vertical_fraction", r.backward_vertical_fraction);
  get_if_present(j, "dims_top_k", r.dims_top_k);
}

void read_eval(const json& j, EvalConfig& e, const std::filesystem::path& path) {
  reject_unknown(j,
                 {"vehicle_iou", "pedestrian_iou", "cyclist_iou", "range_bins",
                  "ap_recall_points"},
                 path, "eval");
  get_if_present(j, "vehicle_iou", e.vehicle_iou);
  get_if_present(j, "pedestrian_iou", e.pedestrian_iou);
  get_if_present(j, "cyclist_iou", e.cyclist_iou);
  if (j.contains("range_bins")) {
    e.range_bins.clear();
    for (const json& bj : j.at("range_bins")) {
      if (!bj.is_array() || bj.size() != 2) {
        throw DatasetError(Kind::Parse, path.string() + ": range bins must be [min, max]");
      }
      e.range_bins.push_back({bj[0].get<double>(), bj[1].get<double>()});
    }
  }
  get_if_present(j, "ap_recall_points", e.ap_recall_points);
}

}  // namespace

void PipelineConfig::validate() const {
  if (!(ground.distance_threshold_m > 0.0)) {
    throw std::invalid_argument("ground distance threshold must be positive");
  }
  if (ground.max_iterations < 1) {
    throw std::invalid_argument("ground removal needs at least one iteration");
  }
  if (ground.min_inlier_ratio < 0.0 || ground.min_inlier_ratio > 1.0) {
    throw std::invalid_argument("ground inlier ratio must lie in [0, 1]");
  }
  if (!(ground.max_plane_tilt_deg > 0.0) || ground.max_plane_tilt_deg > 90.0) {
    throw std::invalid_argument("ground plane tilt limit must lie in (0, 90]");
  }
  fusion.validate();
  tracker.validate();
  refine.validate();
  eval.validate();
  if (jobs < 1) throw std::invalid_argument("jobs must be at least 1");
}

PipelineConfig read_pipeline_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DatasetError(Kind::MissingFile, "cannot open config file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DatasetError(Kind::Parse, path.string() + ": " + e.what());
  }
  if (!j.is_object()) throw DatasetError(Kind::Parse, path.string() + ": expected an object");
  reject_unknown(j,
                 {"crop_fov", "remove_ground_points", "ground", "fusion", "tracker", "refine",
                  "eval", "seed", "jobs"},
                 path, "config");

  PipelineConfig cfg;
  get_if_present(j, "crop_fov", cfg.crop_fov);
  get_if_present(j, "remove_ground_points", cfg.remove_ground_points);
  if (j.contains("ground")) read_ground(j.at("ground"), cfg.ground, path);
  if (j.contains("fusion")) read_fusion(j.at("fusion"), cfg.fusion, path);
  if (j.contains("tracker")) read_tracker(j.at("tracker"), cfg.tracker, path);
  if (j.contains("refine")) read_refine(j.at("refine"), cfg.refine, path);
  if (j.contains("eval")) read_eval(j.at("eval"), cfg.eval, path);
  get_if_present(j, "seed", cfg.seed);
  get_if_present(j, "jobs", cfg.jobs);
  cfg.validate();
  return cfg;
}

void write_pipeline_config(const std::filesystem::path& path, const PipelineConfig& config) {
  json j;
  j["crop_fov"] = config.crop_fov;
  j["remove_ground_points"] = config.remove_ground_points;
  j["ground"] = {{"distance_threshold_m", config.ground.distance_threshold_m},
                 {"max_iterations", config.ground.max_iterations},
                 {"min_inlier_ratio", config.ground.min_inlier_ratio},
                 {"max_plane_tilt_deg", config.ground.max_plane_tilt_deg}};
  j["fusion"] = {{"scales", config.fusion.scales},
                 {"score_threshold", config.fusion.score_threshold},
                 {"nms_iou", config.fusion.nms_iou},
                 {"class_aware", config.fusion.class_aware}};
  j["tracker"] = {{"frame_rate_hz", config.tracker.frame_rate_hz},
                  {"max_velocity_change_mps", config.tracker.max_velocity_change_mps},
                  {"max_orientation_change_deg", config.tracker.max_orientation_change_deg},
                  {"moving_speed_threshold_mps", config.tracker.moving_speed_threshold_mps},
                  {"min_assignment_iou", config.tracker.min_assignment_iou},
                  {"fov_half_angle_deg", config.tracker.fov_half_angle_deg}};
  j["refine"] = {{"min_hit_ratio", config.refine.min_hit_ratio},
                 {"min_track_length_s", config.refine.min_track_length_s},
                 {"min_max_point_count", config.refine.min_max_point_count},
                 {"recovery_min_iou", config.refine.recovery_min_iou},
                 {"backward_vertical_fraction", config.refine.backward_vertical_fraction},
                 {"dims_top_k", config.refine.dims_top_k}};
  json bins = json::array();
  for (const RangeBin& bin : config.eval.range_bins) {
    bins.push_back(json::array({bin.min_m, bin.max_m}));
  }
  j["eval"] = {{"vehicle_iou", config.eval.vehicle_iou},
               {"pedestrian_iou", config.eval.pedestrian_iou},
               {"cyclist_iou", config.eval.cyclist_iou},
               {"range_bins", std::move(bins)},
               {"ap_recall_points", config.eval.ap_recall_points}};
  j["seed"] = config.seed;
  j["jobs"] = config.jobs;

  std::ofstream out(path);
  if (!out) throw DatasetError(Kind::MissingFile, "cannot write config " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace fast3d
