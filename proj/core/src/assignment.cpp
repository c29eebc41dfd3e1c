// Copyright (c) 2026 fast3d contributors
// SPDX-License-Identifier: Apache-2.0

#include "fast3d/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fast3d {

CostMatrix CostMatrix::filled(int rows, int cols, double value) {
  if (rows < 0 || cols < 0) throw std::invalid_argument("cost matrix dims must be >= 0");
  CostMatrix m;
  m.rows = rows;
  m.cols = cols;
  m.costs.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), value);
  return m;
}

AssignmentResult solve_assignment(const CostMatrix& matrix) {
  const int rows = matrix.rows;
  const int cols = matrix.cols;
  if (matrix.costs.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {
    throw std::invalid_argument("cost matrix storage does not match dims");
  }

  AssignmentResult result;
  result.row_to_col.assign(static_cast<std::size_t>(rows), -1);
  result.col_to_row.assign(static_cast<std::size_t>(cols), -1);
  if (rows == 0 || cols == 0) return result;

  double max_abs = 0.0;
  for (const double c : matrix.costs) {
    if (std::isnan(c)) throw std::invalid_argument("cost matrix contains NaN");
    if (std::isfinite(c)) max_abs = std::max(max_abs, std::abs(c));
  }
  const int n = std::max(rows, cols);
  // Large enough that one extra feasible pair always beats any cost shuffle,
  // small enough to keep the potentials numerically clean.
  const double big = (max_abs + 1.0) * (2.0 * n + 2.0);

  auto cost = [&](int r, int c) -> double {
    if (r < rows && c < cols && matrix.feasible(r, c)) return matrix.at(r, c);
    return big;
  };

  // Shortest augmenting paths with potentials, 1-based helpers.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<double> v(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<int> match(static_cast<std::size_t>(n) + 1, 0);  // col -> row, 1-based
  std::vector<int> way(static_cast<std::size_t>(n) + 1, 0);

  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(n) + 1, inf);
    std::vector<bool> used(static_cast<std::size_t>(n) + 1, false);
    do {
      used[static_cast<std::size_t>(j0)] = true;
      const int i0 = match[static_cast<std::size_t>(j0)];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const double cur =
            cost(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] - v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(match[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (match[static_cast<std::size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      match[static_cast<std::size_t>(j0)] = match[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }

  for (int j = 1; j <= n; ++j) {
    const int i = match[static_cast<std::size_t>(j)];
    const int r = i - 1;
    const int c = j - 1;
    if (r < rows && c < cols && matrix.feasible(r, c)) {
      result.row_to_col[static_cast<std::size_t>(r)] = c;
      result.col_to_row[static_cast<std::size_t>(c)] = r;
      result.total_cost += matrix.at(r, c);
      ++result.matched;
    }
  }
  return result;
}

}  // namespace fast3d
