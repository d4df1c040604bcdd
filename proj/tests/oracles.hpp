#pragma once

// Independent reference implementations used to cross-check the library.
// Everything here is written for clarity over speed and deliberately avoids
// the library's algorithms: enumeration instead of the Hungarian solver,
// repeated max-selection instead of sorted NMS, full sorting instead of
// histogram medians.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "motrack/box.hpp"
#include "motrack/detection.hpp"
#include "motrack/image.hpp"

namespace oracles {

// Minimum-cost assignment by enumerating every injective row-to-column map.
// Only sane for min(rows, cols) <= ~7. Returns the best total cost and the
// per-row assignment (-1 for unassigned rows).
struct BruteAssignment {
  double total = 0.0;
  std::vector<int> row_to_col;
};

inline BruteAssignment brute_force_assignment(const std::vector<double>& cost, int rows,
                                              int cols) {
  BruteAssignment best;
  best.total = std::numeric_limits<double>::infinity();
  best.row_to_col.assign(rows, -1);
  if (rows == 0 || cols == 0) {
    best.total = 0.0;
    return best;
  }

  if (rows <= cols) {
    std::vector<int> perm(cols);
    std::iota(perm.begin(), perm.end(), 0);
    std::sort(perm.begin(), perm.end());
    do {
      double total = 0.0;
      for (int r = 0; r < rows; ++r)
        total += cost[static_cast<std::size_t>(r) * cols + perm[r]];
      if (total < best.total) {
        best.total = total;
        for (int r = 0; r < rows; ++r) best.row_to_col[r] = perm[r];
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  } else {
    // Assign every column instead, then invert.
    std::vector<int> perm(rows);
    std::iota(perm.begin(), perm.end(), 0);
    do {
      double total = 0.0;
      for (int c = 0; c < cols; ++c)
        total += cost[static_cast<std::size_t>(perm[c]) * cols + c];
      if (total < best.total) {
        best.total = total;
        std::fill(best.row_to_col.begin(), best.row_to_col.end(), -1);
        for (int c = 0; c < cols; ++c) best.row_to_col[perm[c]] = c;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return best;
}

// Greedy non-maximum suppression by literal restatement: take the most
// confident remaining box (earliest on ties), drop everything overlapping it
// too much, repeat. Returns kept indices in original order.
inline std::vector<int> greedy_nms(const std::vector<motrack::Detection>& dets,
                                   double iou_threshold) {
  std::vector<int> remaining(dets.size());
  std::iota(remaining.begin(), remaining.end(), 0);
  std::vector<int> kept;
  while (!remaining.empty()) {
    int best = remaining.front();
    for (int i : remaining)
      if (dets[i].confidence > dets[best].confidence) best = i;
    kept.push_back(best);
    std::vector<int> next;
    for (int i : remaining)
      if (i != best && !(motrack::iou(dets[i].box, dets[best].box) > iou_threshold))
        next.push_back(i);
    remaining = std::move(next);
  }
  std::sort(kept.begin(), kept.end());
  return kept;
}

// Per-pixel temporal median by sorting every pixel's stack of values.
inline motrack::ImageU8 sorting_median(const std::vector<motrack::ImageU8>& frames) {
  const int w = frames.front().width, h = frames.front().height;
  motrack::ImageU8 out(w, h);
  std::vector<std::uint8_t> values(frames.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (std::size_t t = 0; t < frames.size(); ++t) values[t] = frames[t].at(x, y);
      std::sort(values.begin(), values.end());
      out.at(x, y) = values[(values.size() - 1) / 2];
    }
  }
  return out;
}

// Optimal gated bipartite matching for one frame by recursive enumeration:
// maximize the number of gated pairs, then minimize their total distance.
// Points are (x, y); fine up to ~6 per side.
struct GatedMatch {
  int tp = 0;
  double distance = 0.0;  // summed over matched pairs
};

inline void gated_match_rec(const std::vector<std::pair<double, double>>& dets,
                            const std::vector<std::pair<double, double>>& gts, double radius,
                            std::size_t di, std::vector<char>& used, int tp, double dist,
                            GatedMatch& best) {
  if (di == dets.size()) {
    if (tp > best.tp || (tp == best.tp && dist < best.distance)) best = {tp, dist};
    return;
  }
  gated_match_rec(dets, gts, radius, di + 1, used, tp, dist, best);  // leave unmatched
  for (std::size_t gi = 0; gi < gts.size(); ++gi) {
    if (used[gi]) continue;
    double dx = dets[di].first - gts[gi].first;
    double dy = dets[di].second - gts[gi].second;
    double d = std::sqrt(dx * dx + dy * dy);
    if (d > radius) continue;
    used[gi] = 1;
    gated_match_rec(dets, gts, radius, di + 1, used, tp + 1, dist + d, best);
    used[gi] = 0;
  }
}

inline GatedMatch brute_force_gated_match(const std::vector<std::pair<double, double>>& dets,
                                          const std::vector<std::pair<double, double>>& gts,
                                          double radius) {
  GatedMatch best;
  best.distance = std::numeric_limits<double>::infinity();
  if (dets.empty()) return {0, 0.0};
  std::vector<char> used(gts.size(), 0);
  gated_match_rec(dets, gts, radius, 0, used, 0, 0.0, best);
  return best;
}

}  // namespace oracles
