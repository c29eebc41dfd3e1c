// Copyright (c) 2026 fast3d contributors
// SPDX-License-Identifier: Apache-2.0

#include "fast3d/dataset_io.hpp"

#include "fast3d/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace fast3d {
namespace {

using nlohmann::json;
using Kind = DatasetError::Kind;

std::string frame_file_stem(int index) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%06d", index);
  return buf;
}

std::vector<float> read_float_file(const std::filesystem::path& path,
                                   std::size_t row_floats) {
  if (!std::filesystem::exists(path)) {
    throw DatasetError(Kind::MissingFile, "missing file: " + path.string());
  }
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw DatasetError(Kind::Parse, "cannot open: " + path.string());
  const auto bytes = static_cast<std::size_t>(in.tellg());
  const std::size_t row_bytes = row_floats * sizeof(float);
  if (bytes % row_bytes != 0) {
    throw DatasetError(Kind::Parse, path.string() + ": size " + std::to_string(bytes) +
                                        " is not a multiple of " + std::to_string(row_bytes));
  }
  std::vector<float> data(bytes / sizeof(float));
  in.seekg(0);
  in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(bytes));
  if (!in) throw DatasetError(Kind::Parse, "short read: " + path.string());
  return data;
}

void write_float_file(const std::filesystem::path& path, const std::vector<float>& data) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DatasetError(Kind::Parse, "cannot write: " + path.string());
  out.write(reinterpret_cast<const char*>(data.data()),
            static_cast<std::streamsize>(data.size() * sizeof(float)));
  if (!out) throw DatasetError(Kind::Parse, "short write: " + path.string());
}

json parse_json(const std::string& text, const std::filesystem::path& path) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw DatasetError(Kind::Parse, "invalid JSON in " + path.string());
  return j;
}

std::string read_text_file(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw DatasetError(Kind::MissingFile, "missing file: " + path.string());
  }
  std::ifstream in(path);
  if (!in) throw DatasetError(Kind::Parse, "cannot open: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void reject_unknown_keys(const json& obj, const std::set<std::string>& known,
                         const std::filesystem::path& path, const char* what) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!known.contains(key)) {
      throw DatasetError(Kind::Parse, path.string() + ": unknown " + what + " key '" + key + "'");
    }
  }
}

double require_number(const json& obj, const char* key, const std::filesystem::path& path) {
  if (!obj.contains(key) || !obj[key].is_number()) {
    throw DatasetError(Kind::Parse, path.string() + ": missing numeric '" + key + "'");
  }
  return obj[key].get<double>();
}

RigidPose pose_from_json(const json& frame, const std::filesystem::path& path) {
  if (!frame.contains("pose") || !frame["pose"].is_array() || frame["pose"].size() != 12) {
    throw DatasetError(Kind::Parse,
                       path.string() + ": pose must be 12 numbers (row-major [R|t])");
  }
  RigidPose pose;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      pose.rotation(r, c) = frame["pose"][static_cast<std::size_t>(4 * r + c)].get<double>();
    }
    pose.translation[r] = frame["pose"][static_cast<std::size_t>(4 * r + 3)].get<double>();
  }
  return pose;
}

Detection parse_detection_line(const json& j, const std::filesystem::path& path) {
  static const std::set<std::string> keys = {"frame", "scale", "class", "cx",     "cy",
                                             "cz",    "l",     "w",     "h",      "heading",
                                             "score"};
  reject_unknown_keys(j, keys, path, "detection");
  Detection det;
  det.frame = static_cast<int>(require_number(j, "frame", path));
  if (!j.contains("class") || !j["class"].is_string()) {
    throw DatasetError(Kind::Parse, path.string() + ": missing 'class'");
  }
  const auto cls = object_class_from_string(j["class"].get<std::string>());
  if (!cls) {
    throw DatasetError(Kind::Parse,
                       path.string() + ": unknown class '" + j["class"].get<std::string>() + "'");
  }
  det.cls = *cls;
  det.box.center = {require_number(j, "cx", path), require_number(j, "cy", path),
                    require_number(j, "cz", path)};
  det.box.dims = {require_number(j, "l", path), require_number(j, "w", path),
                  require_number(j, "h", path)};
  det.box.heading = require_number(j, "heading", path);
  det.score = require_number(j, "score", path);
  return det;
}

json detection_to_json(const Detection& det, double scale) {
  json j;
  j["frame"] = det.frame;
  j["scale"] = scale;
  j["class"] = std::string(to_string(det.cls));
  j["cx"] = det.box.center.x();
  j["cy"] = det.box.center.y();
  j["cz"] = det.box.center.z();
  j["l"] = det.box.dims.x();
  j["w"] = det.box.dims.y();
  j["h"] = det.box.dims.z();
  j["heading"] = det.box.heading;
  j["score"] = det.score;
  return j;
}

}  // namespace

PointCloud read_point_cloud(const std::filesystem::path& path) {
  const std::vector<float> data = read_float_file(path, 4);
  PointCloud cloud;
  const std::size_t n = data.size() / 4;
  cloud.points.reserve(n);
  cloud.intensity.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    cloud.points.push_back({data[4 * i], data[4 * i + 1], data[4 * i + 2]});
    cloud.intensity.push_back(data[4 * i + 3]);
  }
  return cloud;
}

void write_point_cloud(const std::filesystem::path& path, const PointCloud& cloud) {
  std::vector<float> data;
  data.reserve(cloud.points.size() * 4);
  for (std::size_t i = 0; i < cloud.points.size(); ++i) {
    const Vec3& p = cloud.points[i];
    data.push_back(static_cast<float>(p.x()));
    data.push_back(static_cast<float>(p.y()));
    data.push_back(static_cast<float>(p.z()));
    data.push_back(cloud.intensity.empty() ? 0.0f : cloud.intensity[i]);
  }
  write_float_file(path, data);
}

FlowField read_flow(const std::filesystem::path& path, FlowDirection direction) {
  const std::vector<float> data = read_float_file(path, 3);
  FlowField flow;
  flow.direction = direction;
  const std::size_t n = data.size() / 3;
  flow.vectors.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    flow.vectors.push_back({data[3 * i], data[3 * i + 1], data[3 * i + 2]});
  }
  return flow;
}

void write_flow(const std::filesystem::path& path, const FlowField& flow) {
  std::vector<float> data;
  data.reserve(flow.vectors.size() * 3);
  for (const Vec3& v : flow.vectors) {
    data.push_back(static_cast<float>(v.x()));
    data.push_back(static_cast<float>(v.y()));
    data.push_back(static_cast<float>(v.z()));
  }
  write_float_file(path, data);
}

std::map<double, DetectionSet> read_detections(const std::filesystem::path& path,
                                               int expected_frame) {
  const std::string text = read_text_file(path);
  std::map<double, DetectionSet> by_scale;
  std::istringstream lines(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    if (line.empty()) continue;
    const json j = parse_json(line, path);
    const double scale = require_number(j, "scale", path);
    if (!(scale > 0.0)) {
      throw DatasetError(Kind::Validation,
                         path.string() + ": non-positive scale on line " + std::to_string(line_no));
    }
    Detection det = parse_detection_line(j, path);
    if (det.frame != expected_frame) {
      throw DatasetError(Kind::Validation, path.string() + ": line " + std::to_string(line_no) +
                                               " has frame " + std::to_string(det.frame) +
                                               ", expected " + std::to_string(expected_frame));
    }
    auto [it, inserted] = by_scale.try_emplace(scale);
    if (inserted) it->second.frame = expected_frame;
    it->second.detections.push_back(det);
  }
  return by_scale;
}

void write_detections(const std::filesystem::path& path,
                      const std::map<double, DetectionSet>& by_scale) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DatasetError(Kind::Parse, "cannot write: " + path.string());
  for (const auto& [scale, set] : by_scale) {
    for (const Detection& det : set.detections) {
      out << detection_to_json(det, scale).dump() << '\n';
    }
  }
}

SequenceDataset load_sequence(const std::filesystem::path& manifest_path) {
  const std::filesystem::path dir = manifest_path.parent_path();
  const json manifest = parse_json(read_text_file(manifest_path), manifest_path);
  static const std::set<std::string> top_keys = {"sequence_id", "frame_rate", "frames"};
  static const std::set<std::string> frame_keys = {
      "index", "timestamp", "pose", "cloud", "forward_flow", "backward_flow", "detections"};
  if (!manifest.is_object()) {
    throw DatasetError(Kind::Parse, manifest_path.string() + ": manifest must be an object");
  }
  reject_unknown_keys(manifest, top_keys, manifest_path, "manifest");
  SequenceDataset dataset;
  if (!manifest.contains("sequence_id") || !manifest["sequence_id"].is_string()) {
    throw DatasetError(Kind::Parse, manifest_path.string() + ": missing 'sequence_id'");
  }
  dataset.sequence_id = manifest["sequence_id"].get<std::string>();
  dataset.frame_rate = require_number(manifest, "frame_rate", manifest_path);
  if (!manifest.contains("frames") || !manifest["frames"].is_array()) {
    throw DatasetError(Kind::Parse, manifest_path.string() + ": missing 'frames' array");
  }

  auto optional_path = [&](const json& frame, const char* key) -> std::optional<std::filesystem::path> {
    if (!frame.contains(key) || frame[key].is_null()) return std::nullopt;
    if (!frame[key].is_string()) {
      throw DatasetError(Kind::Parse,
                         manifest_path.string() + ": '" + key + "' must be a relative path");
    }
    return dir / frame[key].get<std::string>();
  };

  for (const json& fj : manifest["frames"]) {
    reject_unknown_keys(fj, frame_keys, manifest_path, "frame");
    FrameRecord record;
    record.index = static_cast<int>(require_number(fj, "index", manifest_path));
    record.timestamp = require_number(fj, "timestamp", manifest_path);
    record.pose = pose_from_json(fj, manifest_path);
    const auto cloud_path = optional_path(fj, "cloud");
    if (!cloud_path) {
      throw DatasetError(Kind::Parse, manifest_path.string() + ": frame missing 'cloud'");
    }
    record.cloud = read_point_cloud(*cloud_path);
    if (const auto p = optional_path(fj, "forward_flow")) {
      record.forward_flow = read_flow(*p, FlowDirection::Forward);
    }
    if (const auto p = optional_path(fj, "backward_flow")) {
      record.backward_flow = read_flow(*p, FlowDirection::Backward);
    }
    if (const auto p = optional_path(fj, "detections")) {
      record.detections = read_detections(*p, record.index);
    }
    dataset.frames.push_back(std::move(record));
  }
  validate_dataset(dataset);
  return dataset;
}

void save_sequence(const SequenceDataset& dataset, const std::filesystem::path& directory) {
  validate_dataset(dataset);
  std::filesystem::create_directories(directory);
  json frames = json::array();
  for (const FrameRecord& record : dataset.frames) {
    const std::string stem = frame_file_stem(record.index);
    json fj;
    fj["index"] = record.index;
    fj["timestamp"] = record.timestamp;
    json pose = json::array();
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) pose.push_back(record.pose.rotation(r, c));
      pose.push_back(record.pose.translation[r]);
    }
    fj["pose"] = pose;
    fj["cloud"] = "clouds/" + stem + ".bin";
    write_point_cloud(directory / "clouds" / (stem + ".bin"), record.cloud);
    if (record.forward_flow) {
      fj["forward_flow"] = "flow/" + stem + "_fwd.bin";
      write_flow(directory / "flow" / (stem + "_fwd.bin"), *record.forward_flow);
    }
    if (record.backward_flow) {
      fj["backward_flow"] = "flow/" + stem + "_bwd.bin";
      write_flow(directory / "flow" / (stem + "_bwd.bin"), *record.backward_flow);
    }
    if (!record.detections.empty()) {
      fj["detections"] = "detections/" + stem + ".jsonl";
      write_detections(directory / "detections" / (stem + ".jsonl"), record.detections);
    }
    frames.push_back(std::move(fj));
  }
  json manifest;
  manifest["sequence_id"] = dataset.sequence_id;
  manifest["frame_rate"] = dataset.frame_rate;
  manifest["frames"] = std::move(frames);
  std::ofstream out(directory / "manifest.json", std::ios::trunc);
  if (!out) {
    throw DatasetError(Kind::Parse, "cannot write: " + (directory / "manifest.json").string());
  }
  out << manifest.dump(2) << '\n';
}

std::map<int, RigidPose> load_poses(const std::filesystem::path& manifest_path) {
  const json manifest = parse_json(read_text_file(manifest_path), manifest_path);
  if (!manifest.is_object() || !manifest.contains("frames") || !manifest["frames"].is_array()) {
    throw DatasetError(Kind::Parse, manifest_path.string() + ": missing 'frames' array");
  }
  std::map<int, RigidPose> poses;
  for (const json& fj : manifest["frames"]) {
    const int index = static_cast<int>(require_number(fj, "index", manifest_path));
    if (!poses.emplace(index, pose_from_json(fj, manifest_path)).second) {
      throw DatasetError(Kind::FrameOrder,
                         manifest_path.string() + ": duplicate frame index " +
                             std::to_string(index));
    }
  }
  return poses;
}

}  // namespace fast3d
