// Copyright (c) 2026 fast3d contributors
// SPDX-License-Identifier: Apache-2.0

#include <fast3d/assignment.hpp>

#include <benchmark/benchmark.h>

#include <random>

using namespace fast3d;

namespace {

CostMatrix random_costs(int n, double feasible_fraction, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> cost(0.0, 1.0);
  std::bernoulli_distribution keep(feasible_fraction);
  CostMatrix matrix = CostMatrix::filled(n, n, CostMatrix::kInfeasible);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      if (keep(rng)) matrix.at(r, c) = cost(rng);
    }
  }
  return matrix;
}

void BM_SolveAssignmentDense(benchmark::State& state) {
  const CostMatrix matrix = random_costs(static_cast<int>(state.range(0)), 1.0, 61);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_assignment(matrix));
  }
}
BENCHMARK(BM_SolveAssignmentDense)->Arg(4)->Arg(16)->Arg(64)->Arg(256);

void BM_SolveAssignmentSparse(benchmark::State& state) {
  // Tracking-shaped: most track/detection pairs fail the IoU floor.
  const CostMatrix matrix = random_costs(static_cast<int>(state.range(0)), 0.1, 62);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_assignment(matrix));
  }
}
BENCHMARK(BM_SolveAssignmentSparse)->Arg(16)->Arg(64)->Arg(256);

}  // namespace
