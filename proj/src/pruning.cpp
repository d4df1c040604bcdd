#include "motrack/pruning.hpp"

#include <algorithm>
#include <numeric>

#include "motrack/errors.hpp"

namespace motrack {

DetectionSet area_filter(const DetectionSet& set, double max_area) {
  if (!(max_area > 0.0)) throw config_error("area filter needs max_area > 0");
  DetectionSet out(set.num_frames());
  for (int t = 0; t < set.num_frames(); ++t)
    for (const Detection& d : set.frame(t))
      if (!(d.box.area() > max_area)) out.add(d);
  return out;
}

DetectionSet confidence_filter(const DetectionSet& set,
                               const std::map<Level, double>& thresholds) {
  DetectionSet out(set.num_frames());
  for (int t = 0; t < set.num_frames(); ++t) {
    for (const Detection& d : set.frame(t)) {
      auto it = thresholds.find(d.level);
      if (it == thresholds.end())
        throw config_error(std::string("no confidence threshold for level '") +
                           level_name(d.level) + "'");
      if (d.confidence >= it->second) out.add(d);
    }
  }
  return out;
}

DetectionSet nms(const DetectionSet& set, double iou_threshold) {
  if (!(iou_threshold >= 0.0 && iou_threshold <= 1.0))
    throw config_error("NMS threshold must be in [0, 1]");

  DetectionSet out(set.num_frames());
  std::vector<int> order;
  for (int t = 0; t < set.num_frames(); ++t) {
    const auto& dets = set.frame(t);
    order.resize(dets.size());
    std::iota(order.begin(), order.end(), 0);
    // Highest confidence first; input position breaks ties so the result does
    // not depend on sort internals.
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return dets[a].confidence > dets[b].confidence;
    });

    std::vector<std::uint8_t> suppressed(dets.size(), 0);
    std::vector<std::uint8_t> kept(dets.size(), 0);
    for (int i : order) {
      if (suppressed[i]) continue;
      kept[i] = 1;
      for (int j : order)
        if (!kept[j] && !suppressed[j] && iou(dets[i].box, dets[j].box) > iou_threshold)
          suppressed[j] = 1;
    }
    // Survivors go out in their original input order.
    for (std::size_t i = 0; i < dets.size(); ++i)
      if (kept[i]) out.add(dets[i]);
  }
  return out;
}

DetectionSet prune(const DetectionSet& set, const PrunerConfig& cfg) {
  return nms(confidence_filter(area_filter(set, cfg.max_box_area), cfg.confidence_thresholds),
             cfg.nms_iou);
}

}  // namespace motrack
