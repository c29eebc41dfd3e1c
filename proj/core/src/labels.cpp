// Copyright (c) 2026 fast3d contributors
// SPDX-License-Identifier: Apache-2.0

#include "fast3d/labels.hpp"

#include "fast3d/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>

namespace fast3d {
namespace {

using nlohmann::json;
using Kind = DatasetError::Kind;

double require_number(const json& obj, const char* key, const std::filesystem::path& path) {
  if (!obj.contains(key) || !obj[key].is_number()) {
    throw DatasetError(Kind::Parse, path.string() + ": missing numeric '" + key + "'");
  }
  return obj[key].get<double>();
}

// Shortest round-trip decimal form, locale-independent.
std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::vector<PseudoLabel> read_labels(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw DatasetError(Kind::MissingFile, "missing file: " + path.string());
  }
  std::ifstream in(path);
  if (!in) throw DatasetError(Kind::Parse, "cannot open: " + path.string());
  static const std::set<std::string> keys = {"frame", "class", "cx",      "cy",    "cz",
                                             "l",     "w",     "h",       "heading",
                                             "score", "track_id"};
  std::vector<PseudoLabel> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      throw DatasetError(Kind::Parse,
                         path.string() + ": invalid JSON on line " + std::to_string(line_no));
    }
    for (const auto& [key, value] : j.items()) {
      (void)value;
      if (!keys.contains(key)) {
        throw DatasetError(Kind::Parse, path.string() + ": unknown label key '" + key + "'");
      }
    }
    PseudoLabel label;
    label.frame = static_cast<int>(require_number(j, "frame", path));
    if (!j.contains("class") || !j["class"].is_string()) {
      throw DatasetError(Kind::Parse, path.string() + ": missing 'class'");
    }
    const auto cls = object_class_from_string(j["class"].get<std::string>());
    if (!cls) {
      throw DatasetError(Kind::Parse, path.string() + ": unknown class '" +
                                          j["class"].get<std::string>() + "'");
    }
    label.cls = *cls;
    label.box.center = {require_number(j, "cx", path), require_number(j, "cy", path),
                        require_number(j, "cz", path)};
    label.box.dims = {require_number(j, "l", path), require_number(j, "w", path),
                      require_number(j, "h", path)};
    label.box.heading = require_number(j, "heading", path);
    label.score = require_number(j, "score", path);
    label.track_id = static_cast<int>(require_number(j, "track_id", path));
    out.push_back(label);
  }
  return out;
}

void write_labels(const std::filesystem::path& path, const std::vector<PseudoLabel>& labels) {
  std::vector<PseudoLabel> sorted = labels;
  std::stable_sort(sorted.begin(), sorted.end(), [](const PseudoLabel& a, const PseudoLabel& b) {
    if (a.frame != b.frame) return a.frame < b.frame;
    return a.track_id < b.track_id;
  });
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DatasetError(Kind::Parse, "cannot write: " + path.string());
  for (const PseudoLabel& label : sorted) {
    json j;
    j["frame"] = label.frame;
    j["class"] = std::string(to_string(label.cls));
    j["cx"] = label.box.center.x();
    j["cy"] = label.box.center.y();
    j["cz"] = label.box.center.z();
    j["l"] = label.box.dims.x();
    j["w"] = label.box.dims.y();
    j["h"] = label.box.dims.z();
    j["heading"] = label.box.heading;
    j["score"] = label.score;
    j["track_id"] = label.track_id;
    out << j.dump() << '\n';
  }
}

void write_labels_text(const std::filesystem::path& directory,
                       const std::vector<PseudoLabel>& labels) {
  std::filesystem::create_directories(directory);
  std::map<int, std::vector<const PseudoLabel*>> by_frame;
  for (const PseudoLabel& label : labels) by_frame[label.frame].push_back(&label);
  for (const auto& [frame, rows] : by_frame) {
    char name[32];
    std::snprintf(name, sizeof name, "%06d.txt", frame);
    std::ofstream out(directory / name, std::ios::trunc);
    if (!out) throw DatasetError(Kind::Parse, "cannot write: " + (directory / name).string());
    for (const PseudoLabel* label : rows) {
      const OrientedBox& b = label->box;
      out << to_string(label->cls) << ' ' << format_double(b.dims.x()) << ' '
          << format_double(b.dims.y()) << ' ' << format_double(b.dims.z()) << ' '
          << format_double(b.center.x()) << ' ' << format_double(b.center.y()) << ' '
          << format_double(b.center.z()) << ' ' << format_double(b.heading) << ' '
          << format_double(label->score) << '\n';
    }
  }
}

}  // namespace fast3d
