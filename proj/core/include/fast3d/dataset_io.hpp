// Copyright (c) 2026 fast3d contributors
// SPDX-License-Identifier: Apache-2.0
//
// On-disk sequence layout. A sequence directory holds one manifest.json:
//
//   {"sequence_id": "...", "frame_rate": 10.0,
//    "frames": [{"index": 0, "timestamp": 0.0,
//                "pose": [r00,r01,r02,tx, r10,r11,r12,ty, r20,r21,r22,tz],
//                "cloud": "clouds/000000.bin",
//                "forward_flow": "flow/000000_fwd.bin",   // optional
//                "backward_flow": "flow/000000_bwd.bin",  // optional
//                "detections": "detections/000000.jsonl"  // optional
//               }, ...]}
//
// All paths are relative to the manifest's directory. Clouds are raw
// little-endian float32, N rows of (x, y, z, intensity); flow files are N
// rows of (dx, dy, dz) aligned with the cloud, in meters per frame.
// Detection files are JSON lines:
//
//   {"frame":0,"scale":1.0,"class":"vehicle","cx":..,"cy":..,"cz":..,
//    "l":..,"w":..,"h":..,"heading":..,"score":..}
//
// Loading validates everything (see validate_dataset) and throws
// DatasetError; save_sequence followed by load_sequence reproduces the
// dataset bit-exactly.

#pragma once

#include "fast3d/dataset.hpp"

#include <filesystem>
#include <map>

namespace fast3d {

PointCloud read_point_cloud(const std::filesystem::path& path);
void write_point_cloud(const std::filesystem::path& path, const PointCloud& cloud);

FlowField read_flow(const std::filesystem::path& path, FlowDirection direction);
void write_flow(const std::filesystem::path& path, const FlowField& flow);

/// Reads one frame's detections grouped by scale. `expected_frame` must
/// match every line's frame field.
std::map<double, DetectionSet> read_detections(const std::filesystem::path& path,
                                               int expected_frame);
void write_detections(const std::filesystem::path& path,
                      const std::map<double, DetectionSet>& by_scale);

SequenceDataset load_sequence(const std::filesystem::path& manifest_path);

/// Writes manifest.json plus clouds/, flow/, detections/ under `directory`
/// (created if needed). Cloud and flow values are stored as float32; a
/// dataset that came from load_sequence round-trips bit-exactly.
void save_sequence(const SequenceDataset& dataset,
                   const std::filesystem::path& directory);

/// Frame index -> pose from a manifest, without touching the payload files.
/// Enough for range binning during evaluation.
std::map<int, RigidPose> load_poses(const std::filesystem::path& manifest_path);

}  // namespace fast3d
