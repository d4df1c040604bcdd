#include "motrack/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "motrack/errors.hpp"

namespace motrack {
namespace {

// Hungarian algorithm in the potentials-and-augmenting-paths form. Requires
// n <= m and assigns every row. 1-based internally; column 0 is a sentinel.
std::vector<int> solve_rows_leq_cols(const std::vector<double>& a, int n, int m) {
  constexpr double INF = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<int> p(m + 1, 0), way(m + 1, 0);

  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(m + 1, INF);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      int i0 = p[j0], j1 = 0;
      double delta = INF;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        double cur = a[(i0 - 1) * static_cast<std::size_t>(m) + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    // Walk the augmenting path back, flipping assignments.
    do {
      int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= m; ++j)
    if (p[j] != 0) row_to_col[p[j] - 1] = j - 1;
  return row_to_col;
}

}  // namespace

std::vector<int> min_cost_assignment(const std::vector<double>& cost, int rows, int cols) {
  if (rows < 0 || cols < 0 ||
      cost.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols))
    throw config_error("assignment cost matrix size does not match rows x cols");
  for (double c : cost)
    if (!std::isfinite(c)) throw numerical_error("assignment costs must be finite");
  if (rows == 0 || cols == 0) return std::vector<int>(rows, -1);

  if (rows <= cols) return solve_rows_leq_cols(cost, rows, cols);

  // Wide case: solve the transpose, then invert the mapping.
  std::vector<double> t(cost.size());
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      t[static_cast<std::size_t>(c) * rows + r] = cost[static_cast<std::size_t>(r) * cols + c];
  std::vector<int> col_to_row = solve_rows_leq_cols(t, cols, rows);
  std::vector<int> row_to_col(rows, -1);
  for (int c = 0; c < cols; ++c)
    if (col_to_row[c] >= 0) row_to_col[col_to_row[c]] = c;
  return row_to_col;
}

Association associate(const std::vector<Box>& tracks, const std::vector<Box>& detections,
                      double iou_threshold) {
  Association out;
  const int n = static_cast<int>(tracks.size());
  const int m = static_cast<int>(detections.size());
  if (n == 0 || m == 0) {
    for (int i = 0; i < n; ++i) out.unmatched_tracks.push_back(i);
    for (int j = 0; j < m; ++j) out.unmatched_detections.push_back(j);
    return out;
  }

  std::vector<double> cost(static_cast<std::size_t>(n) * m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j)
      cost[static_cast<std::size_t>(i) * m + j] = 1.0 - iou(tracks[i], detections[j]);

  std::vector<int> row_to_col = min_cost_assignment(cost, n, m);
  std::vector<char> det_matched(m, 0);
  for (int i = 0; i < n; ++i) {
    int j = row_to_col[i];
    // The solver always produces a maximum assignment, so gate low-overlap
    // pairs back out rather than accept them.
    if (j >= 0 && iou(tracks[i], detections[j]) >= iou_threshold) {
      out.matches.emplace_back(i, j);
      det_matched[j] = 1;
    } else {
      out.unmatched_tracks.push_back(i);
    }
  }
  for (int j = 0; j < m; ++j)
    if (!det_matched[j]) out.unmatched_detections.push_back(j);
  return out;
}

}  // namespace motrack
