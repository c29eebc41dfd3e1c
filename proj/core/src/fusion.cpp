// Copyright (c) 2026 fast3d contributors
// SPDX-License-Identifier: Apache-2.0

#include "fast3d/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fast3d {

void FusionParams::validate() const {
  if (scales.empty()) throw std::invalid_argument("fusion needs at least one scale");
  for (const double s : scales) {
    if (!(s > 0.0) || !std::isfinite(s)) {
      throw std::invalid_argument("fusion scales must be positive");
    }
  }
  if (score_threshold < 0.0 || score_threshold > 1.0) {
    throw std::invalid_argument("score_threshold must lie in [0, 1]");
  }
  if (nms_iou < 0.0 || nms_iou > 1.0) {
    throw std::invalid_argument("nms_iou must lie in [0, 1]");
  }
}

DetectionSet rescale_detections(const DetectionSet& detections, double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw std::invalid_argument("detection scale must be positive");
  }
  DetectionSet out;
  out.frame = detections.frame;
  out.detections.reserve(detections.size());
  for (const Detection& det : detections.detections) {
    Detection mapped = det;
    mapped.box = scale_box(det.box, 1.0 / scale);
    out.detections.push_back(mapped);
  }
  return out;
}

DetectionSet nms(const DetectionSet& detections, double iou_threshold, bool class_aware) {
  if (iou_threshold < 0.0 || iou_threshold > 1.0) {
    throw std::invalid_argument("nms_iou must lie in [0, 1]");
  }
  std::vector<std::size_t> order(detections.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return detections.detections[a].score > detections.detections[b].score;
  });

  DetectionSet out;
  out.frame = detections.frame;
  for (const std::size_t i : order) {
    const Detection& candidate = detections.detections[i];
    bool suppressed = false;
    for (const Detection& kept : out.detections) {
      if (class_aware && kept.cls != candidate.cls) continue;
      if (iou_bev(kept.box, candidate.box) >= iou_threshold) {
        suppressed = true;
        break;
      }
    }
    if (!suppressed) out.detections.push_back(candidate);
  }
  return out;
}

DetectionSet fuse_multiscale(const std::map<double, DetectionSet>& by_scale,
                             const FusionParams& params) {
  params.validate();
  DetectionSet pooled;
  bool have_frame = false;
  for (const auto& [scale, set] : by_scale) {
    const bool configured =
        std::any_of(params.scales.begin(), params.scales.end(),
                    [&](double s) { return s == scale; });
    if (!configured) {
      throw std::invalid_argument("detections at unconfigured scale " + std::to_string(scale));
    }
    if (!have_frame) {
      pooled.frame = set.frame;
      have_frame = true;
    }
    const DetectionSet mapped = rescale_detections(set, scale);
    pooled.detections.insert(pooled.detections.end(), mapped.detections.begin(),
                             mapped.detections.end());
  }
  DetectionSet fused = nms(pooled, params.nms_iou, params.class_aware);
  std::erase_if(fused.detections,
                [&](const Detection& det) { return det.score < params.score_threshold; });
  return fused;
}

}  // namespace fast3d
