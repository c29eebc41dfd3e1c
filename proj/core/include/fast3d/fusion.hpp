// Copyright (c) 2026 fast3d contributors
// SPDX-License-Identifier: Apache-2.0
//
// Test-time augmentation fusion: detections produced on rescaled copies of a
// frame are mapped back to metric space, pooled, deduplicated with greedy
// NMS, and thresholded. The confidence threshold is applied after NMS so a
// low-score duplicate can still be suppressed by a high-score winner.

#pragma once

#include "fast3d/detection.hpp"

#include <map>
#include <vector>

namespace fast3d {

struct FusionParams {
  std::vector<double> scales{0.8, 1.0, 1.2};
  double score_threshold{0.8};
  double nms_iou{0.1};
  bool class_aware{true};  // suppression only within a class

  void validate() const;  // throws std::invalid_argument
};

/// Maps detections produced on a cloud scaled by `scale` back to the
/// unscaled frame: every box goes through scale_box(box, 1/scale). Scale
/// must be positive.
DetectionSet rescale_detections(const DetectionSet& detections, double scale);

/// Greedy NMS, highest score first (ties broken by input order). A box is
/// suppressed when its BEV IoU with an already-kept box reaches
/// iou_threshold; with class_aware, only same-class boxes suppress each
/// other. Output keeps descending score order; no kept same-class pair has
/// iou_bev >= iou_threshold.
DetectionSet nms(const DetectionSet& detections, double iou_threshold, bool class_aware);

/// Full fusion of one frame: rescale every per-scale set, pool in ascending
/// scale order, NMS, then drop boxes below score_threshold. Scales present
/// in the input must be configured in params (std::invalid_argument
/// otherwise); configured scales may be absent.
DetectionSet fuse_multiscale(const std::map<double, DetectionSet>& by_scale,
                             const FusionParams& params);

}  // namespace fast3d
