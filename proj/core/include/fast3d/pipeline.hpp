// Copyright (c) 2026 fast3d contributors
// SPDX-License-Identifier: Apache-2.0
//
// End-to-end drivers tying the stages together: raw sequences in, label
// files and reports out. The CLI is a thin argument parser over these.

#pragma once

#include "fast3d/config.hpp"
#include "fast3d/dataset.hpp"
#include "fast3d/labels.hpp"
#include "fast3d/metrics.hpp"
#include "fast3d/refine.hpp"
#include "fast3d/scenario.hpp"
#include "fast3d/tracker.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace fast3d {

/// Turns raw frames into tracker input: FOV crop, multi-scale fusion in the
/// sensor frame, projection to world, detection point counts from the full
/// cloud, and ground removal for the flow cloud. Deterministic for a fixed
/// config.
std::vector<PreparedFrame> prepare_frames(const SequenceDataset& dataset,
                                          const PipelineConfig& config);

struct SequenceSummary {
  std::string sequence_id;
  std::size_t frames{0};
  std::size_t fused_detections{0};
  RefineStats refine;
  std::size_t labels{0};
};

struct LabelOutput {
  std::vector<PseudoLabel> labels;  // world frame, (frame, track_id) order
  SequenceSummary summary;
};

/// prepare -> track -> refine -> export for one sequence. The tracker's
/// frame rate is taken from the dataset, not the config.
LabelOutput label_sequence(const SequenceDataset& dataset, const PipelineConfig& config);

/// Labels every manifest, up to config.jobs sequences in parallel. Each
/// sequence writes <out_dir>/<sequence_id>/labels.jsonl (and labels_txt/
/// with sensor-frame boxes when write_text is set); the run writes
/// <out_dir>/summary.json and <out_dir>/effective_config.json. Sequence ids
/// must be unique. Summaries come back in manifest order.
std::vector<SequenceSummary> run_label(const std::vector<std::filesystem::path>& manifests,
                                       const std::filesystem::path& out_dir,
                                       const PipelineConfig& config, bool write_text);

struct SimulateSummary {
  std::size_t frames{0};
  std::size_t objects{0};
  std::size_t gt_labels{0};
};

/// Generates the scene and its detections, then writes a complete sequence
/// directory: manifest.json with payloads, gt.jsonl with ground-truth
/// labels, and scenario.json echoing the spec actually used.
SimulateSummary run_simulate(const ScenarioSpec& spec, std::uint64_t seed,
                             const std::filesystem::path& out_dir);

/// Scores a label file against ground truth; poses for range binning come
/// from the manifest. Writes <out_dir>/report.json and report.txt and
/// returns the report.
MetricsReport run_eval(const std::filesystem::path& labels_path,
                       const std::filesystem::path& gt_path,
                       const std::filesystem::path& manifest_path, const EvalConfig& config,
                       const std::filesystem::path& out_dir);

}  // namespace fast3d
