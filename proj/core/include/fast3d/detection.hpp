// Copyright (c) 2026 fast3d contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "fast3d/geometry.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fast3d {

enum class ObjectClass { Vehicle, Pedestrian, Cyclist };

inline constexpr ObjectClass kAllClasses[] = {ObjectClass::Vehicle,
                                              ObjectClass::Pedestrian,
                                              ObjectClass::Cyclist};

std::string_view to_string(ObjectClass cls);
std::optional<ObjectClass> object_class_from_string(std::string_view name);

/// One detector output box. `point_count` is the number of cloud points
/// inside the box; it is filled by the pipeline once cloud and box live in
/// the same frame, and is 0 until then.
struct Detection {
  int frame{0};
  ObjectClass cls{ObjectClass::Vehicle};
  OrientedBox box;
  double score{0.0};  // in [0, 1]
  int point_count{0};
};

/// Detections of a single frame, in a stable order.
struct DetectionSet {
  int frame{0};
  std::vector<Detection> detections;

  std::size_t size() const { return detections.size(); }
  bool empty() const { return detections.empty(); }
};

}  // namespace fast3d
