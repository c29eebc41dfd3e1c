// Copyright (c) 2026 fast3d contributors
// SPDX-License-Identifier: Apache-2.0

#include "fast3d/refine.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "fast3d/geometry.hpp"

namespace fast3d {
namespace {

// Indices of states carrying an assigned detection, in frame order.
std::vector<std::size_t> detection_states(const Track& track) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < track.states.size(); ++i) {
    if (track.states[i].detection) out.push_back(i);
  }
  return out;
}

}  // namespace

void RefineConfig::validate() const {
  if (min_hit_ratio < 0.0 || min_hit_ratio > 1.0) {
    throw std::invalid_argument("min_hit_ratio must lie in [0, 1]");
  }
  if (!(min_track_length_s >= 0.0)) {
    throw std::invalid_argument("min_track_length_s must be non-negative");
  }
  if (min_max_point_count < 0) {
    throw std::invalid_argument("min_max_point_count must be non-negative");
  }
  if (!(recovery_min_iou > 0.0) || recovery_min_iou > 1.0) {
    throw std::invalid_argument("recovery_min_iou must lie in (0, 1]");
  }
  if (!(backward_vertical_fraction > 0.0) || backward_vertical_fraction > 1.0) {
    throw std::invalid_argument("backward_vertical_fraction must lie in (0, 1]");
  }
  if (dims_top_k < 1) throw std::invalid_argument("dims_top_k must be at least 1");
}

double hit_ratio(const Track& track) {
  if (track.states.empty()) throw std::invalid_argument("track has no states");
  return static_cast<double>(track.assigned_detection_count) /
         static_cast<double>(track.states.size());
}

FilterResult filter_tracks(std::vector<Track> tracks, const RefineConfig& cfg,
                           const TrackerConfig& tracker_cfg) {
  const auto min_length = static_cast<std::size_t>(
      std::ceil(cfg.min_track_length_s * tracker_cfg.frame_rate_hz));
  FilterResult result;
  for (Track& track : tracks) {
    bool keep = hit_ratio(track) >= cfg.min_hit_ratio && track.length() >= min_length;
    if (keep) {
      int max_points = 0;
      for (const std::size_t i : detection_states(track)) {
        max_points = std::max(max_points, track.states[i].detection->point_count);
      }
      keep = max_points > cfg.min_max_point_count;
    }
    (keep ? result.kept : result.removed).push_back(std::move(track));
  }
  return result;
}

void correct_dimensions(Track& track, const RefineConfig& cfg) {
  cfg.validate();
  std::vector<std::size_t> candidates = detection_states(track);
  if (candidates.empty()) return;
  // Stable sort by point count keeps earlier frames first among ties.
  std::stable_sort(candidates.begin(), candidates.end(),
                   [&](std::size_t a, std::size_t b) {
                     return track.states[a].detection->point_count >
                            track.states[b].detection->point_count;
                   });
  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(cfg.dims_top_k),
                                              candidates.size());
  Vec3 dims = Vec3::Zero();
  for (std::size_t i = 0; i < k; ++i) {
    dims += track.states[candidates[i]].detection->box.dims;
  }
  dims /= static_cast<double>(k);
  for (TrackState& state : track.states) state.box.dims = dims;
}

bool is_static_track(const Track& track, const TrackerConfig& tracker_cfg) {
  for (const TrackState& state : track.states) {
    if (!state.mean_flow) continue;
    if (state.mean_flow->norm() * tracker_cfg.frame_rate_hz >
        tracker_cfg.moving_speed_threshold_mps) {
      return false;
    }
  }
  return true;
}

bool correct_static(Track& track, const TrackerConfig& tracker_cfg) {
  if (track.cls != ObjectClass::Vehicle) return false;
  if (!is_static_track(track, tracker_cfg)) return false;
  const std::vector<std::size_t> observed = detection_states(track);
  if (observed.empty()) return false;

  Vec3 center = Vec3::Zero();
  std::vector<double> headings;
  std::vector<double> weights;
  headings.reserve(observed.size());
  for (const std::size_t i : observed) {
    center += track.states[i].box.center;
    headings.push_back(track.states[i].box.heading);
    weights.push_back(1.0);
  }
  center /= static_cast<double>(observed.size());
  const double heading = circular_mean(headings, weights);

  for (TrackState& state : track.states) {
    state.box.center = center;
    state.box.heading = heading;
  }
  return true;
}

std::vector<Track> recover_by_flow(std::span<const Track> removed,
                                   std::span<const PreparedFrame> frames,
                                   const RefineConfig& cfg) {
  cfg.validate();
  std::vector<Track> recovered;
  for (const Track& track : removed) {
    const std::vector<std::size_t> observed = detection_states(track);
    if (observed.size() < 2) continue;

    // Candidate signature: no two assigned detections overlap in BEV.
    bool disjoint = true;
    for (std::size_t a = 0; a < observed.size() && disjoint; ++a) {
      for (std::size_t b = a + 1; b < observed.size(); ++b) {
        if (iou_bev(track.states[observed[a]].detection->box,
                    track.states[observed[b]].detection->box) > 0.0) {
          disjoint = false;
          break;
        }
      }
    }
    if (!disjoint) continue;

    // Carry the first detection forward on raw mean flow; a box that holds
    // no flow points simply stays put for that step.
    std::map<int, const OrientedBox*> targets;
    for (std::size_t idx = 1; idx < observed.size(); ++idx) {
      const TrackState& s = track.states[observed[idx]];
      targets.emplace(s.frame, &s.detection->box);
    }
    const int first_frame = track.states[observed.front()].frame;
    const int last_frame = track.states[observed.back()].frame;
    if (last_frame >= static_cast<int>(frames.size())) {
      throw std::invalid_argument("track refers to a frame outside the sequence");
    }

    OrientedBox box = track.states[observed.front()].detection->box;
    bool consistent = true;
    for (int f = first_frame; f < last_frame && consistent; ++f) {
      const PreparedFrame& frame = frames[static_cast<std::size_t>(f)];
      Vec3 step = Vec3::Zero();
      if (frame.forward_flow) {
        if (const auto flow = mean_box_flow(box, frame.flow_cloud, *frame.forward_flow)) {
          step = *flow;
        }
      }
      box.center += step;
      const auto target = targets.find(f + 1);
      if (target != targets.end() &&
          iou_bev(box, *target->second) < cfg.recovery_min_iou) {
        consistent = false;
      }
    }
    if (consistent) recovered.push_back(track);
  }
  return recovered;
}

int backward_complete(Track& track, std::span<const PreparedFrame> frames,
                      const TrackerConfig& tracker_cfg, const RefineConfig& cfg) {
  cfg.validate();
  if (track.states.empty()) return 0;

  // The gate anchor starts from the first state's forward estimate, negated
  // into the backward direction.
  std::optional<Vec3> prev_backward;
  if (track.states.front().mean_flow) prev_backward = -*track.states.front().mean_flow;

  int prepended = 0;
  while (track.states.front().frame > 0) {
    const int f = track.states.front().frame;
    const OrientedBox& box = track.states.front().box;
    const PreparedFrame& here = frames[static_cast<std::size_t>(f)];
    const PreparedFrame& back = frames[static_cast<std::size_t>(f - 1)];

    std::optional<Vec3> candidate;
    if (here.backward_flow) {
      candidate = mean_box_flow(box, here.flow_cloud, *here.backward_flow);
    } else if (back.forward_flow) {
      if (const auto fwd = mean_box_flow(box, back.flow_cloud, *back.forward_flow)) {
        candidate = -*fwd;
      }
    }
    if (!candidate) break;

    const Vec3 gated = gate_flow(prev_backward, *candidate, tracker_cfg);
    if (gated != *candidate) break;

    OrientedBox shifted = box;
    shifted.center += *candidate;
    const std::size_t support =
        count_points_in_box(shifted, back.cloud, cfg.backward_vertical_fraction);
    if (support == 0) break;

    TrackState state;
    state.frame = f - 1;
    state.box = shifted;
    state.source = StateSource::BackwardExtrapolated;
    state.point_count = static_cast<int>(support);
    state.mean_flow = -*candidate;
    track.states.insert(track.states.begin(), std::move(state));
    prev_backward = candidate;
    ++prepended;
  }
  return prepended;
}

RefineResult refine_all(std::vector<Track> tracks, std::span<const PreparedFrame> frames,
                        const TrackerConfig& tracker_cfg, const RefineConfig& cfg) {
  cfg.validate();
  tracker_cfg.validate();

  RefineResult result;
  result.stats.input_tracks = tracks.size();

  FilterResult filtered = filter_tracks(std::move(tracks), cfg, tracker_cfg);
  result.stats.kept = filtered.kept.size();
  result.stats.removed = filtered.removed.size();

  for (Track& track : filtered.kept) {
    correct_dimensions(track, cfg);
    correct_static(track, tracker_cfg);
  }

  std::vector<Track> recovered = recover_by_flow(filtered.removed, frames, cfg);
  result.stats.recovered = recovered.size();
  for (Track& track : recovered) correct_dimensions(track, cfg);

  result.tracks = std::move(filtered.kept);
  result.tracks.insert(result.tracks.end(), std::make_move_iterator(recovered.begin()),
                       std::make_move_iterator(recovered.end()));
  for (Track& track : result.tracks) {
    result.stats.backward_states += static_cast<std::size_t>(
        backward_complete(track, frames, tracker_cfg, cfg));
  }
  return result;
}

std::vector<PseudoLabel> tracks_to_labels(std::span<const Track> tracks,
                                          std::span<const PreparedFrame> frames) {
  std::vector<PseudoLabel> labels;
  for (const Track& track : tracks) {
    for (const TrackState& state : track.states) {
      if (state.frame < 0 || state.frame >= static_cast<int>(frames.size())) {
        throw std::invalid_argument("track state refers to a frame outside the sequence");
      }
      PseudoLabel label;
      label.frame = frames[static_cast<std::size_t>(state.frame)].index;
      label.cls = track.cls;
      label.box = state.box;
      label.score = track.confidence;
      label.track_id = track.id;
      labels.push_back(std::move(label));
    }
  }
  return labels;
}

}  // namespace fast3d
