// Copyright (c) 2026 fast3d contributors
// SPDX-License-Identifier: Apache-2.0

#include <fast3d/geometry.hpp>

#include <benchmark/benchmark.h>

#include <numbers>
#include <random>
#include <vector>

using namespace fast3d;

namespace {

std::vector<OrientedBox> random_boxes(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pos(-20.0, 20.0);
  std::uniform_real_distribution<double> dim(0.8, 5.0);
  std::uniform_real_distribution<double> ang(-std::numbers::pi, std::numbers::pi);
  std::vector<OrientedBox> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    OrientedBox b;
    b.center = {pos(rng), pos(rng), 0.1 * pos(rng)};
    b.dims = {dim(rng), dim(rng), dim(rng)};
    b.heading = normalize_angle(ang(rng));
    out.push_back(b);
  }
  return out;
}

PointCloud random_cloud(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pos(-40.0, 40.0);
  PointCloud cloud;
  cloud.points.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) cloud.points.push_back({pos(rng), pos(rng), 0.05 * pos(rng)});
  return cloud;
}

void BM_IouBev(benchmark::State& state) {
  const auto boxes = random_boxes(256, 1);
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& a = boxes[i % boxes.size()];
    const auto& b = boxes[(i * 7 + 3) % boxes.size()];
    benchmark::DoNotOptimize(iou_bev(a, b));
    ++i;
  }
}
BENCHMARK(BM_IouBev);

void BM_Iou3d(benchmark::State& state) {
  const auto boxes = random_boxes(256, 2);
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& a = boxes[i % boxes.size()];
    const auto& b = boxes[(i * 7 + 3) % boxes.size()];
    benchmark::DoNotOptimize(iou_3d(a, b));
    ++i;
  }
}
BENCHMARK(BM_Iou3d);

void BM_PointsInBox(benchmark::State& state) {
  const auto cloud = random_cloud(static_cast<int>(state.range(0)), 3);
  const auto boxes = random_boxes(16, 4);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(points_in_box(boxes[i % boxes.size()], cloud));
    ++i;
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PointsInBox)->Arg(1000)->Arg(10000)->Arg(100000);

void BM_TransformCloud(benchmark::State& state) {
  const auto cloud = random_cloud(static_cast<int>(state.range(0)), 5);
  const RigidPose pose = RigidPose::from_yaw(0.4, {100.0, -50.0, 1.7});
  for (auto _ : state) {
    benchmark::DoNotOptimize(transform_cloud(pose, cloud));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TransformCloud)->Arg(10000)->Arg(100000);

}  // namespace
