#pragma once

#include <map>

#include "motrack/detection.hpp"

namespace motrack {

// False-positive pruning, applied per frame in the fixed order
// area -> confidence -> NMS. All filters keep the input ordering of survivors.
struct PrunerConfig {
  // Detections larger than this (w * h, strictly greater) are artifacts of
  // the imaging, not objects of interest.
  double max_box_area = 35.0 * 35.0;

  // Per-level minimum confidence; a detection survives when its confidence is
  // >= the threshold for its level.
  std::map<Level, double> confidence_thresholds = {
      {Level::low, 0.0}, {Level::medium, 0.0}, {Level::high, 0.0}, {Level::builtin, 0.0}};

  // Greedy NMS suppresses boxes whose overlap with an already-kept box is
  // strictly above this.
  double nms_iou = 0.7;
};

DetectionSet area_filter(const DetectionSet& set, double max_area);

// Throws when a detection's level has no threshold entry.
DetectionSet confidence_filter(const DetectionSet& set,
                               const std::map<Level, double>& thresholds);

// Greedy per-frame NMS: repeatedly keep the most confident remaining box
// (ties broken toward earlier input position) and drop what overlaps it.
DetectionSet nms(const DetectionSet& set, double iou_threshold);

DetectionSet prune(const DetectionSet& set, const PrunerConfig& cfg);

}  // namespace motrack
