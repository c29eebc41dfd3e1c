// Copyright (c) 2026 fast3d contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "fast3d/detection.hpp"
#include "fast3d/geometry.hpp"

#include <filesystem>
#include <vector>

namespace fast3d {

/// One exported box. Used both for pipeline output and, with score 1 and
/// track_id = object id, for ground truth.
struct PseudoLabel {
  int frame{0};
  ObjectClass cls{ObjectClass::Vehicle};
  OrientedBox box;
  double score{0.0};
  int track_id{0};
};

/// JSON-lines label file, one object per line:
///   {"frame":0,"class":"vehicle","cx":..,"cy":..,"cz":..,
///    "l":..,"w":..,"h":..,"heading":..,"score":..,"track_id":..}
/// Lines are ordered by (frame, track_id). Throws DatasetError.
std::vector<PseudoLabel> read_labels(const std::filesystem::path& path);
void write_labels(const std::filesystem::path& path,
                  const std::vector<PseudoLabel>& labels);

/// Plain-text export for detector re-training: one file per frame named
/// <frame:06>.txt with one "class l w h cx cy cz heading score" row per
/// label, in the given order. Boxes are written exactly as passed; convert
/// to the sensor frame first if the consumer expects that.
void write_labels_text(const std::filesystem::path& directory,
                       const std::vector<PseudoLabel>& labels);

}  // namespace fast3d
