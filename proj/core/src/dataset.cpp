// Copyright (c) 2026 fast3d contributors
// SPDX-License-Identifier: Apache-2.0

#include "fast3d/dataset.hpp"

#include "fast3d/errors.hpp"

#include <cmath>
#include <string>

namespace fast3d {

namespace {

std::string frame_tag(const SequenceDataset& d, std::size_t i) {
  return "sequence '" + d.sequence_id + "' frame " + std::to_string(d.frames[i].index);
}

}  // namespace

std::string_view to_string(ObjectClass cls) {
  switch (cls) {
    case ObjectClass::Vehicle: return "vehicle";
    case ObjectClass::Pedestrian: return "pedestrian";
    case ObjectClass::Cyclist: return "cyclist";
  }
  return "vehicle";
}

std::optional<ObjectClass> object_class_from_string(std::string_view name) {
  if (name == "vehicle") return ObjectClass::Vehicle;
  if (name == "pedestrian") return ObjectClass::Pedestrian;
  if (name == "cyclist") return ObjectClass::Cyclist;
  return std::nullopt;
}

void validate_dataset(const SequenceDataset& dataset) {
  using Kind = DatasetError::Kind;
  if (!(dataset.frame_rate > 0.0) || !std::isfinite(dataset.frame_rate)) {
    throw DatasetError(Kind::Validation, "sequence '" + dataset.sequence_id +
                                             "': frame_rate must be positive");
  }
  for (std::size_t i = 0; i < dataset.frames.size(); ++i) {
    const FrameRecord& f = dataset.frames[i];
    if (i > 0) {
      const FrameRecord& prev = dataset.frames[i - 1];
      if (f.index <= prev.index) {
        throw DatasetError(Kind::FrameOrder,
                           frame_tag(dataset, i) + ": frame indices must be strictly increasing");
      }
      if (f.timestamp < prev.timestamp) {
        throw DatasetError(Kind::FrameOrder,
                           frame_tag(dataset, i) + ": timestamps must be non-decreasing");
      }
    }
    if (!f.pose.is_orthonormal(1e-6)) {
      throw DatasetError(Kind::Validation, frame_tag(dataset, i) + ": pose is not orthonormal");
    }
    if (!f.cloud.intensity.empty() && f.cloud.intensity.size() != f.cloud.points.size()) {
      throw DatasetError(Kind::LengthMismatch,
                         frame_tag(dataset, i) + ": intensity length does not match cloud");
    }
    for (const auto* flow : {&f.forward_flow, &f.backward_flow}) {
      if (flow->has_value() && (*flow)->vectors.size() != f.cloud.points.size()) {
        throw DatasetError(Kind::LengthMismatch,
                           frame_tag(dataset, i) + ": flow length does not match cloud");
      }
    }
    if (f.forward_flow && f.forward_flow->direction != FlowDirection::Forward) {
      throw DatasetError(Kind::Validation,
                         frame_tag(dataset, i) + ": forward_flow has backward direction");
    }
    if (f.backward_flow && f.backward_flow->direction != FlowDirection::Backward) {
      throw DatasetError(Kind::Validation,
                         frame_tag(dataset, i) + ": backward_flow has forward direction");
    }
    for (const auto& [scale, set] : f.detections) {
      if (!(scale > 0.0)) {
        throw DatasetError(Kind::Validation,
                           frame_tag(dataset, i) + ": detection scale must be positive");
      }
      if (set.frame != f.index) {
        throw DatasetError(Kind::Validation,
                           frame_tag(dataset, i) + ": detection set frame field mismatch");
      }
      for (const Detection& det : set.detections) {
        if (det.frame != f.index) {
          throw DatasetError(Kind::Validation,
                             frame_tag(dataset, i) + ": detection frame field mismatch");
        }
        if (det.score < 0.0 || det.score > 1.0 || !std::isfinite(det.score)) {
          throw DatasetError(Kind::Validation,
                             frame_tag(dataset, i) + ": detection score outside [0, 1]");
        }
        try {
          validate_box(det.box);
        } catch (const std::invalid_argument& e) {
          throw DatasetError(Kind::Validation, frame_tag(dataset, i) + ": " + e.what());
        }
      }
    }
  }
}

}  // namespace fast3d
