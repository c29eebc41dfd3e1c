// Copyright (c) 2026 fast3d contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <limits>
#include <vector>

namespace fast3d {

/// Dense row-major cost matrix. Mark a pair infeasible by storing +infinity;
/// NaN anywhere is rejected.
struct CostMatrix {
  int rows{0};
  int cols{0};
  std::vector<double> costs;  // rows * cols entries

  static constexpr double kInfeasible = std::numeric_limits<double>::infinity();

  static CostMatrix filled(int rows, int cols, double value);

  double& at(int r, int c) { return costs[static_cast<std::size_t>(r * cols + c)]; }
  double at(int r, int c) const { return costs[static_cast<std::size_t>(r * cols + c)]; }
  bool feasible(int r, int c) const { return at(r, c) != kInfeasible; }
};

struct AssignmentResult {
  std::vector<int> row_to_col;  // -1 where unmatched
  std::vector<int> col_to_row;  // -1 where unmatched
  double total_cost{0.0};      // sum over matched (feasible) pairs
  int matched{0};
};

/// Optimal assignment restricted to feasible pairs: maximizes the number of
/// matched pairs first, then minimizes their total cost. O(n^3) shortest
/// augmenting paths on the square matrix obtained by padding with a large
/// finite sentinel; a perfect matching there trades one sentinel against one
/// feasible pair, so fewer matches can never win.
AssignmentResult solve_assignment(const CostMatrix& matrix);

}  // namespace fast3d
