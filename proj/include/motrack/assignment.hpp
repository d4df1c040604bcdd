#pragma once

#include <vector>

#include "motrack/box.hpp"

namespace motrack {

// Large-but-finite cost for "forbidden" pairings. Padding a rectangular
// problem with this keeps the solver exact while making it prefer any real
// pairing over a padded one, provided real costs stay well below it.
constexpr double kForbiddenCost = 1e6;

// Exact minimum-cost assignment (Hungarian algorithm with potentials,
// O(n^2 m)). `cost` is row-major rows x cols; every cost must be finite.
// Returns, per row, the assigned column or -1; exactly min(rows, cols) rows
// are assigned, and among all maximum assignments the total cost is minimal.
std::vector<int> min_cost_assignment(const std::vector<double>& cost, int rows, int cols);

// Detection-to-track matching for the tracker: cost is 1 - IoU, solved
// exactly, then pairs with IoU below the threshold are discarded as
// unmatched. Indices refer to the input vectors.
struct Association {
  std::vector<std::pair<int, int>> matches;  // (track index, detection index)
  std::vector<int> unmatched_tracks;
  std::vector<int> unmatched_detections;
};

Association associate(const std::vector<Box>& tracks, const std::vector<Box>& detections,
                      double iou_threshold);

}  // namespace motrack
