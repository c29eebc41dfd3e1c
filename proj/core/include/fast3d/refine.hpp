// Copyright (c) 2026 fast3d contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fast3d/labels.hpp"
#include "fast3d/track.hpp"
#include "fast3d/tracker.hpp"

namespace fast3d {

/// Post-tracking cleanup: coverage filters, shape and pose rigidification,
/// flow-consistency recovery of fragmented fast movers, and backward
/// completion of tracks first detected late.
struct RefineConfig {
  double min_hit_ratio{0.3};
  double min_track_length_s{0.5};
  /// Strict bound: the best assigned detection must exceed this point count.
  int min_max_point_count{15};
  /// Propagated box must overlap every later assigned detection at least
  /// this much (BEV) for a removed track to be recovered.
  double recovery_min_iou{0.3};
  /// Backward extension only continues while the extended box holds at least
  /// one point in this top fraction of its height, so it cannot creep along
  /// the ground.
  double backward_vertical_fraction{0.7};
  /// Dimensions come from the states with the most supporting points.
  int dims_top_k{3};

  void validate() const;
};

/// Fraction of states backed by an assigned detection; a track matched twice
/// over seven frames scores 2/7.
double hit_ratio(const Track& track);

struct FilterResult {
  std::vector<Track> kept;
  std::vector<Track> removed;
};

/// Splits tracks into kept and removed. Kept tracks satisfy all of: hit
/// ratio >= min_hit_ratio, length >= min_track_length_s worth of frames,
/// and max assigned-detection point count strictly above min_max_point_count.
FilterResult filter_tracks(std::vector<Track> tracks, const RefineConfig& cfg,
                           const TrackerConfig& tracker_cfg);

/// Replaces every state's dimensions with the unweighted mean over the
/// dims_top_k assigned detections with the most points (ties resolved
/// toward earlier frames). Rigid objects do not change size; the best-seen
/// frames know the size best.
void correct_dimensions(Track& track, const RefineConfig& cfg);

/// True when no gated flow estimate on the track ever exceeded the moving
/// speed threshold.
bool is_static_track(const Track& track, const TrackerConfig& tracker_cfg);

/// For static vehicles, replaces every state's center with the mean and the
/// heading with the circular mean over assigned-detection states. Returns
/// whether the track qualified.
bool correct_static(Track& track, const TrackerConfig& tracker_cfg);

/// Second chance for removed tracks whose assigned detections never overlap
/// pairwise (the signature of a fast mover shredded by the coverage filter):
/// the first detection's box is carried forward by ungated per-frame mean
/// flow, and the track is recovered when the carried box overlaps the
/// assigned detection at every later detection frame by recovery_min_iou.
std::vector<Track> recover_by_flow(std::span<const Track> removed,
                                   std::span<const PreparedFrame> frames,
                                   const RefineConfig& cfg);

/// Extends a track backward from its first state while a backward flow
/// estimate exists, stays within the tracker's gates, and the shifted box
/// keeps at least one point in its upper portion. Prefers measured backward
/// flow; falls back to negated forward flow from the preceding frame.
/// Returns the number of states prepended.
int backward_complete(Track& track, std::span<const PreparedFrame> frames,
                      const TrackerConfig& tracker_cfg, const RefineConfig& cfg);

struct RefineStats {
  std::size_t input_tracks{0};
  std::size_t kept{0};
  std::size_t removed{0};
  std::size_t recovered{0};
  std::size_t backward_states{0};
};

struct RefineResult {
  std::vector<Track> tracks;
  RefineStats stats;
};

/// Full pass in order: filter, dimension correction, static rigidification,
/// flow recovery of removed tracks, then backward completion of everything
/// that survives.
RefineResult refine_all(std::vector<Track> tracks, std::span<const PreparedFrame> frames,
                        const TrackerConfig& tracker_cfg, const RefineConfig& cfg);

/// One label per track state, scored with the track's final confidence.
/// Frames are exported under the dataset's frame indices.
std::vector<PseudoLabel> tracks_to_labels(std::span<const Track> tracks,
                                          std::span<const PreparedFrame> frames);

}  // namespace fast3d
