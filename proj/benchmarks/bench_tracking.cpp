// Copyright (c) 2026 fast3d contributors
// SPDX-License-Identifier: Apache-2.0

#include <fast3d/fusion.hpp>
#include <fast3d/pipeline.hpp>
#include <fast3d/preprocess.hpp>
#include <fast3d/scenario.hpp>
#include <fast3d/tracker.hpp>

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

using namespace fast3d;

namespace {

DetectionSet clustered_detections(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pos(-30.0, 30.0);
  std::uniform_real_distribution<double> jitter(-1.0, 1.0);
  std::uniform_real_distribution<double> score(0.3, 1.0);
  std::uniform_int_distribution<int> cls(0, 2);
  // Boxes pile onto shared anchors so suppression has real work to do.
  std::vector<Vec3> anchors;
  for (int i = 0; i < n / 8 + 1; ++i) anchors.push_back({pos(rng), pos(rng), 1.0});
  DetectionSet set;
  set.frame = 0;
  for (int i = 0; i < n; ++i) {
    Detection det;
    det.frame = 0;
    det.cls = static_cast<ObjectClass>(cls(rng));
    const Vec3& anchor = anchors[static_cast<std::size_t>(i) % anchors.size()];
    det.box.center = anchor + Vec3{jitter(rng), jitter(rng), 0.0};
    det.box.dims = {4.5, 2.0, 1.6};
    det.box.heading = 0.3 * jitter(rng);
    det.score = score(rng);
    set.detections.push_back(det);
  }
  return set;
}

void BM_Nms(benchmark::State& state) {
  const DetectionSet set = clustered_detections(static_cast<int>(state.range(0)), 11);
  for (auto _ : state) {
    benchmark::DoNotOptimize(nms(set, 0.1, true));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Nms)->Arg(64)->Arg(256)->Arg(1024);

PointCloud ground_heavy_cloud(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pos(-40.0, 40.0);
  std::uniform_real_distribution<double> height(0.3, 3.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> rough(0.0, 0.03);
  PointCloud cloud;
  cloud.points.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double z = unit(rng) < 0.7 ? rough(rng) : height(rng);
    cloud.points.push_back({pos(rng), pos(rng), z});
  }
  return cloud;
}

void BM_RemoveGround(benchmark::State& state) {
  const PointCloud cloud = ground_heavy_cloud(static_cast<int>(state.range(0)), 51);
  const GroundRemovalParams params;
  for (auto _ : state) {
    benchmark::DoNotOptimize(remove_ground(cloud, params, 7));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RemoveGround)->Arg(10000)->Arg(100000);

// A plausible suburban block: three movers, a parked vehicle, moderate
// dropout and clutter.
ScenarioSpec tracking_scene(int frames) {
  ScenarioSpec spec;
  spec.sequence_id = "bench";
  spec.duration_frames = frames;
  spec.ground_density_per_m2 = 0.5;
  spec.ground_margin_m = 8.0;
  const auto mover = [](double x, double y, const Vec3& v) {
    ObjectSpec obj;
    obj.start_xy = Vec2{x, y};
    obj.segments.push_back({0, v});
    obj.point_density_per_m2 = 15.0;
    return obj;
  };
  spec.objects.push_back(mover(12.0, -4.0, {1.5, 0.0, 0.0}));
  spec.objects.push_back(mover(15.0, 3.0, {1.2, 0.2, 0.0}));
  spec.objects.push_back(mover(22.0, -6.0, {2.4, 0.3, 0.0}));
  ObjectSpec parked;
  parked.start_xy = Vec2{10.0, 5.0};
  parked.point_density_per_m2 = 15.0;
  spec.objects.push_back(parked);
  spec.noise.dropout = 0.2;
  spec.noise.center_sigma_m = 0.05;
  spec.noise.clutter_rate = 0.5;
  return spec;
}

void BM_RunTracker(benchmark::State& state) {
  const int frames = static_cast<int>(state.range(0));
  const ScenarioSpec spec = tracking_scene(frames);
  ScenarioData data = generate_scenario(spec, 21);
  simulate_detections(data.dataset, data.gt, spec, 22);
  const PipelineConfig config;
  const std::vector<PreparedFrame> prepared = prepare_frames(data.dataset, config);
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_tracker(prepared, config.tracker));
  }
  state.SetItemsProcessed(state.iterations() * frames);
}
BENCHMARK(BM_RunTracker)->Arg(20)->Arg(100);

void BM_LabelSequence(benchmark::State& state) {
  const int frames = static_cast<int>(state.range(0));
  const ScenarioSpec spec = tracking_scene(frames);
  ScenarioData data = generate_scenario(spec, 31);
  simulate_detections(data.dataset, data.gt, spec, 32);
  const PipelineConfig config;
  for (auto _ : state) {
    benchmark::DoNotOptimize(label_sequence(data.dataset, config));
  }
  state.SetItemsProcessed(state.iterations() * frames);
}
BENCHMARK(BM_LabelSequence)->Arg(20)->Arg(100);

}  // namespace
