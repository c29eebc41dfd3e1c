// Copyright (c) 2026 fast3d contributors
// SPDX-License-Identifier: Apache-2.0

#include "fast3d/metrics.hpp"

#include "fast3d/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace fast3d {
namespace {

using nlohmann::json;

double iou_of(const OrientedBox& a, const OrientedBox& b, IouKind kind) {
  return kind == IouKind::Bev ? iou_bev(a, b) : iou_3d(a, b);
}

const RigidPose& pose_at(const std::map<int, RigidPose>& poses, int frame) {
  const auto it = poses.find(frame);
  if (it == poses.end()) {
    throw std::invalid_argument("no pose provided for frame " + std::to_string(frame));
  }
  return it->second;
}

double bev_distance(const Vec3& center, const RigidPose& pose) {
  return (center.head<2>() - pose.translation.head<2>()).norm();
}

bool in_bin(double distance, const std::optional<RangeBin>& bin) {
  return !bin || (distance >= bin->min_m && distance < bin->max_m);
}

struct LabelOutcome {
  double score{0.0};
  bool matched{false};
  /// The matched ground truth's distance, or the label's own when unmatched.
  double distance{0.0};
};

struct MatchOutcome {
  std::vector<LabelOutcome> labels;
  std::vector<double> gt_distances;
};

// Per-frame greedy matching in descending score order; each label claims the
// unmatched ground-truth box of highest IoU at or above the threshold. Ties
// in score keep input order, so results are deterministic for sorted label
// files.
MatchOutcome match_class(std::span<const PseudoLabel> labels, std::span<const PseudoLabel> gt,
                         const std::map<int, RigidPose>& poses, ObjectClass cls,
                         double iou_threshold, IouKind kind) {
  std::map<int, std::vector<std::size_t>> gt_by_frame;
  MatchOutcome out;
  std::vector<const PseudoLabel*> gt_boxes;
  for (const PseudoLabel& g : gt) {
    if (g.cls != cls) continue;
    gt_by_frame[g.frame].push_back(gt_boxes.size());
    gt_boxes.push_back(&g);
    out.gt_distances.push_back(bev_distance(g.box.center, pose_at(poses, g.frame)));
  }

  std::map<int, std::vector<std::size_t>> labels_by_frame;
  std::vector<const PseudoLabel*> label_boxes;
  for (const PseudoLabel& l : labels) {
    if (l.cls != cls) continue;
    labels_by_frame[l.frame].push_back(label_boxes.size());
    label_boxes.push_back(&l);
  }

  out.labels.resize(label_boxes.size());
  std::vector<bool> gt_taken(gt_boxes.size(), false);
  for (auto& [frame, frame_labels] : labels_by_frame) {
    std::stable_sort(frame_labels.begin(), frame_labels.end(), [&](std::size_t a, std::size_t b) {
      return label_boxes[a]->score > label_boxes[b]->score;
    });
    const auto gt_it = gt_by_frame.find(frame);
    for (const std::size_t li : frame_labels) {
      LabelOutcome& outcome = out.labels[li];
      outcome.score = label_boxes[li]->score;
      double best_iou = 0.0;
      std::size_t best_gt = 0;
      bool found = false;
      if (gt_it != gt_by_frame.end()) {
        for (const std::size_t gi : gt_it->second) {
          if (gt_taken[gi]) continue;
          const double iou = iou_of(label_boxes[li]->box, gt_boxes[gi]->box, kind);
          if (iou >= iou_threshold && iou > best_iou) {
            best_iou = iou;
            best_gt = gi;
            found = true;
          }
        }
      }
      if (found) {
        gt_taken[best_gt] = true;
        outcome.matched = true;
        outcome.distance = out.gt_distances[best_gt];
      } else {
        outcome.matched = false;
        outcome.distance = bev_distance(label_boxes[li]->box.center, pose_at(poses, frame));
      }
    }
  }
  return out;
}

MetricsRow pr_row(const MatchOutcome& matched, ObjectClass cls, double iou_threshold,
                  IouKind kind, int bin_index, const std::optional<RangeBin>& bin) {
  MetricsRow row;
  row.cls = cls;
  row.kind = kind;
  row.iou_threshold = iou_threshold;
  row.bin = bin_index;
  for (const double d : matched.gt_distances) {
    if (in_bin(d, bin)) ++row.gt_count;
  }
  for (const LabelOutcome& o : matched.labels) {
    if (!in_bin(o.distance, bin)) continue;
    ++row.label_count;
    ++(o.matched ? row.tp : row.fp);
  }
  row.fn = row.gt_count - row.tp;
  row.precision = row.label_count == 0
                      ? 1.0
                      : static_cast<double>(row.tp) / static_cast<double>(row.label_count);
  row.recall = row.gt_count == 0
                   ? 1.0
                   : static_cast<double>(row.tp) / static_cast<double>(row.gt_count);
  return row;
}

std::optional<double> ap_from_matches(const MatchOutcome& matched,
                                      const std::optional<RangeBin>& bin, int recall_points) {
  std::size_t gt_in_bin = 0;
  for (const double d : matched.gt_distances) {
    if (in_bin(d, bin)) ++gt_in_bin;
  }
  if (gt_in_bin == 0) return std::nullopt;

  std::vector<LabelOutcome> sweep = matched.labels;
  std::stable_sort(sweep.begin(), sweep.end(),
                   [](const LabelOutcome& a, const LabelOutcome& b) { return a.score > b.score; });

  // Labels matched to out-of-bin ground truth belong to another bin's curve;
  // unmatched labels count against the bin their center falls in.
  std::vector<double> recalls;
  std::vector<double> precisions;
  std::size_t tp = 0;
  std::size_t fp = 0;
  for (const LabelOutcome& o : sweep) {
    if (!in_bin(o.distance, bin)) continue;
    ++(o.matched ? tp : fp);
    recalls.push_back(static_cast<double>(tp) / static_cast<double>(gt_in_bin));
    precisions.push_back(static_cast<double>(tp) / static_cast<double>(tp + fp));
  }

  // Interpolated precision: the best precision at any recall to the right.
  std::vector<double> best_right(precisions.size());
  double running = 0.0;
  for (std::size_t i = precisions.size(); i-- > 0;) {
    running = std::max(running, precisions[i]);
    best_right[i] = running;
  }

  auto interpolated = [&](double recall) {
    const auto it = std::lower_bound(recalls.begin(), recalls.end(), recall);
    if (it == recalls.end()) return 0.0;
    return best_right[static_cast<std::size_t>(it - recalls.begin())];
  };

  double sum = 0.0;
  int points = 0;
  if (recall_points == 40) {
    for (int i = 1; i <= 40; ++i) sum += interpolated(i / 40.0);
    points = 40;
  } else {
    for (int i = 0; i < recall_points; ++i) {
      sum += interpolated(static_cast<double>(i) / (recall_points - 1));
    }
    points = recall_points;
  }
  return sum / points;
}

std::string format_bin(const std::optional<RangeBin>& bin) {
  if (!bin) return "all";
  char buf[48];
  std::snprintf(buf, sizeof buf, "%g-%gm", bin->min_m, bin->max_m);
  return buf;
}

}  // namespace

std::string to_string(IouKind kind) { return kind == IouKind::Bev ? "bev" : "3d"; }

void EvalConfig::validate() const {
  for (const auto* list : {&vehicle_iou, &pedestrian_iou, &cyclist_iou}) {
    if (list->empty()) throw std::invalid_argument("every class needs at least one threshold");
    for (const double t : *list) {
      if (!(t > 0.0) || t > 1.0) throw std::invalid_argument("IoU thresholds must lie in (0, 1]");
    }
  }
  if (range_bins.empty()) throw std::invalid_argument("range_bins must not be empty");
  for (std::size_t i = 0; i < range_bins.size(); ++i) {
    if (range_bins[i].min_m < 0.0 || !(range_bins[i].min_m < range_bins[i].max_m)) {
      throw std::invalid_argument("range bins must satisfy 0 <= min < max");
    }
    if (i > 0 && range_bins[i].min_m < range_bins[i - 1].max_m) {
      throw std::invalid_argument("range bins must be ascending and disjoint");
    }
  }
  if (ap_recall_points < 2) throw std::invalid_argument("ap_recall_points must be at least 2");
}

const std::vector<double>& EvalConfig::thresholds(ObjectClass cls) const {
  switch (cls) {
    case ObjectClass::Vehicle: return vehicle_iou;
    case ObjectClass::Pedestrian: return pedestrian_iou;
    case ObjectClass::Cyclist: return cyclist_iou;
  }
  return vehicle_iou;
}

std::vector<MetricsRow> evaluate_pr(std::span<const PseudoLabel> labels,
                                    std::span<const PseudoLabel> gt,
                                    const std::map<int, RigidPose>& poses,
                                    double iou_threshold, IouKind kind,
                                    const std::vector<RangeBin>& range_bins) {
  std::vector<MetricsRow> rows;
  for (const ObjectClass cls : kAllClasses) {
    const MatchOutcome matched = match_class(labels, gt, poses, cls, iou_threshold, kind);
    rows.push_back(pr_row(matched, cls, iou_threshold, kind, -1, std::nullopt));
    for (std::size_t b = 0; b < range_bins.size(); ++b) {
      rows.push_back(pr_row(matched, cls, iou_threshold, kind, static_cast<int>(b),
                            range_bins[b]));
    }
  }
  return rows;
}

std::optional<double> average_precision(std::span<const PseudoLabel> labels,
                                        std::span<const PseudoLabel> gt,
                                        const std::map<int, RigidPose>& poses,
                                        ObjectClass cls, double iou_threshold, IouKind kind,
                                        std::optional<RangeBin> bin, int recall_points) {
  if (recall_points < 2) throw std::invalid_argument("recall_points must be at least 2");
  const MatchOutcome matched = match_class(labels, gt, poses, cls, iou_threshold, kind);
  return ap_from_matches(matched, bin, recall_points);
}

MetricsReport compute_metrics(std::span<const PseudoLabel> labels,
                              std::span<const PseudoLabel> gt,
                              const std::map<int, RigidPose>& poses, const EvalConfig& cfg) {
  cfg.validate();
  MetricsReport report;
  report.range_bins = cfg.range_bins;
  for (const ObjectClass cls : kAllClasses) {
    for (const IouKind kind : {IouKind::Bev, IouKind::Box3d}) {
      for (const double threshold : cfg.thresholds(cls)) {
        const MatchOutcome matched = match_class(labels, gt, poses, cls, threshold, kind);
        for (int b = -1; b < static_cast<int>(cfg.range_bins.size()); ++b) {
          const std::optional<RangeBin> bin =
              b < 0 ? std::nullopt
                    : std::optional<RangeBin>(cfg.range_bins[static_cast<std::size_t>(b)]);
          MetricsRow row = pr_row(matched, cls, threshold, kind, b, bin);
          row.ap = ap_from_matches(matched, bin, cfg.ap_recall_points);
          report.rows.push_back(row);
        }
      }
    }
  }
  return report;
}

double closed_gap(double ap_adapted, double ap_source_only, double ap_fully_supervised) {
  if (ap_fully_supervised == ap_source_only) {
    throw std::invalid_argument(
        "closed gap requires distinct source-only and fully-supervised values");
  }
  return (ap_adapted - ap_source_only) / (ap_fully_supervised - ap_source_only) * 100.0;
}

std::string render_table(const MetricsReport& report) {
  // Blocks keyed by (kind, threshold) in first-appearance order; rows are
  // class × metric, columns are all + each range bin.
  std::vector<std::pair<IouKind, double>> blocks;
  for (const MetricsRow& row : report.rows) {
    const std::pair<IouKind, double> key{row.kind, row.iou_threshold};
    if (std::find(blocks.begin(), blocks.end(), key) == blocks.end()) blocks.push_back(key);
  }

  std::string out;
  char buf[64];
  auto cell = [&](const char* text) {
    std::snprintf(buf, sizeof buf, "%10s", text);
    out += buf;
  };
  auto value = [&](double v) {
    std::snprintf(buf, sizeof buf, "%10.4f", v);
    out += buf;
  };

  for (const auto& [kind, threshold] : blocks) {
    std::snprintf(buf, sizeof buf, "== IoU %.2f (%s) ==\n", threshold,
                  to_string(kind).c_str());
    out += buf;
    std::snprintf(buf, sizeof buf, "%-12s%-10s", "class", "metric");
    out += buf;
    cell("all");
    for (const RangeBin& bin : report.range_bins) cell(format_bin(bin).c_str());
    out += '\n';

    for (const ObjectClass cls : kAllClasses) {
      const std::string cls_name{to_string(cls)};
      // Collect this block's rows for the class, indexed by bin.
      std::vector<const MetricsRow*> by_bin(report.range_bins.size() + 1, nullptr);
      for (const MetricsRow& row : report.rows) {
        if (row.cls == cls && row.kind == kind && row.iou_threshold == threshold) {
          by_bin[static_cast<std::size_t>(row.bin + 1)] = &row;
        }
      }
      if (!by_bin[0]) continue;  // class not evaluated at this threshold
      const struct {
        const char* name;
        double MetricsRow::* field;
      } metrics[] = {{"precision", &MetricsRow::precision}, {"recall", &MetricsRow::recall}};
      for (const auto& metric : metrics) {
        std::snprintf(buf, sizeof buf, "%-12s%-10s", cls_name.c_str(), metric.name);
        out += buf;
        for (const MetricsRow* row : by_bin) value(row->*(metric.field));
        out += '\n';
      }
      std::snprintf(buf, sizeof buf, "%-12s%-10s", cls_name.c_str(), "AP");
      out += buf;
      for (const MetricsRow* row : by_bin) {
        if (row->ap) {
          value(*row->ap);
        } else {
          cell("-");
        }
      }
      out += '\n';
    }
    out += '\n';
  }
  return out;
}

void write_report_json(const std::filesystem::path& path, const MetricsReport& report) {
  json j;
  j["range_bins"] = json::array();
  for (const RangeBin& bin : report.range_bins) {
    j["range_bins"].push_back(json::array({bin.min_m, bin.max_m}));
  }
  j["rows"] = json::array();
  for (const MetricsRow& row : report.rows) {
    json r;
    r["class"] = std::string(to_string(row.cls));
    r["iou_kind"] = to_string(row.kind);
    r["iou_threshold"] = row.iou_threshold;
    r["bin"] = row.bin;
    r["gt_count"] = row.gt_count;
    r["label_count"] = row.label_count;
    r["tp"] = row.tp;
    r["fp"] = row.fp;
    r["fn"] = row.fn;
    r["precision"] = row.precision;
    r["recall"] = row.recall;
    if (row.ap) {
      r["ap"] = *row.ap;
    } else {
      r["ap"] = nullptr;
    }
    j["rows"].push_back(std::move(r));
  }
  std::ofstream out(path);
  if (!out) {
    throw DatasetError(DatasetError::Kind::MissingFile,
                       "cannot write report " + path.string());
  }
  out << j.dump(2) << '\n';
}

void write_report_text(const std::filesystem::path& path, const MetricsReport& report) {
  std::ofstream out(path);
  if (!out) {
    throw DatasetError(DatasetError::Kind::MissingFile,
                       "cannot write report " + path.string());
  }
  out << render_table(report);
}

}  // namespace fast3d
