// Copyright (c) 2026 fast3d contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fast3d/geometry.hpp"
#include "fast3d/labels.hpp"

namespace fast3d {

enum class IouKind { Bev, Box3d };

std::string to_string(IouKind kind);

/// Half-open distance interval [min_m, max_m), measured from the per-frame
/// sensor origin in the ground plane.
struct RangeBin {
  double min_m{0.0};
  double max_m{0.0};
};

struct EvalConfig {
  /// IoU thresholds per class, strict tier first.
  std::vector<double> vehicle_iou{0.7, 0.5};
  std::vector<double> pedestrian_iou{0.5, 0.25};
  std::vector<double> cyclist_iou{0.5, 0.25};
  std::vector<RangeBin> range_bins{{0.0, 30.0}, {30.0, 50.0}, {50.0, 75.0}};
  /// 101 = uniform recall grid on [0, 1]; 40 = the grid {1/40, ..., 1}.
  int ap_recall_points{101};

  void validate() const;
  const std::vector<double>& thresholds(ObjectClass cls) const;
};

struct MetricsRow {
  ObjectClass cls{ObjectClass::Vehicle};
  IouKind kind{IouKind::Bev};
  double iou_threshold{0.0};
  /// Index into range_bins; -1 covers all distances.
  int bin{-1};
  std::size_t gt_count{0};
  std::size_t label_count{0};
  std::size_t tp{0};
  std::size_t fp{0};
  std::size_t fn{0};
  double precision{1.0};
  double recall{1.0};
  /// Absent when the bin holds no ground truth.
  std::optional<double> ap;
};

struct MetricsReport {
  std::vector<RangeBin> range_bins;
  std::vector<MetricsRow> rows;
};

/// Matching is per frame and per class: labels in descending score order
/// greedily claim the unmatched ground-truth box of highest IoU at or above
/// the threshold, one to one. A matched label is attributed to its ground
/// truth's range bin; an unmatched label bins by its own center. That keeps
/// tp + fp equal to the attributed label count and tp + fn equal to the
/// ground-truth count in every bin. Poses supply the per-frame sensor origin
/// and must cover every frame referenced.
std::vector<MetricsRow> evaluate_pr(std::span<const PseudoLabel> labels,
                                    std::span<const PseudoLabel> gt,
                                    const std::map<int, RigidPose>& poses,
                                    double iou_threshold, IouKind kind,
                                    const std::vector<RangeBin>& range_bins);

/// Average precision from a global descending-score sweep, interpolated at
/// the recall grid (precision at recall r is the maximum precision achieved
/// at any recall >= r). Labels matched to ground truth outside the bin are
/// ignored for that bin. Absent when the bin holds no ground truth.
std::optional<double> average_precision(std::span<const PseudoLabel> labels,
                                        std::span<const PseudoLabel> gt,
                                        const std::map<int, RigidPose>& poses,
                                        ObjectClass cls, double iou_threshold, IouKind kind,
                                        std::optional<RangeBin> bin, int recall_points);

/// Full report: every class at its thresholds, both IoU kinds, every range
/// bin plus the all-distance row.
MetricsReport compute_metrics(std::span<const PseudoLabel> labels,
                              std::span<const PseudoLabel> gt,
                              const std::map<int, RigidPose>& poses, const EvalConfig& cfg);

/// Fraction of the source-to-supervised gap closed by adaptation, percent.
/// Requires distinct source-only and fully-supervised values.
double closed_gap(double ap_adapted, double ap_source_only, double ap_fully_supervised);

/// Aligned-column text table, one block per (IoU kind, threshold), classes
/// by rows and range bins by columns.
std::string render_table(const MetricsReport& report);

void write_report_json(const std::filesystem::path& path, const MetricsReport& report);
void write_report_text(const std::filesystem::path& path, const MetricsReport& report);

}  // namespace fast3d
