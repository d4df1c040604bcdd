#pragma once

#include <algorithm>

namespace motrack {

// Axis-aligned box stored as center + size, the shape detections and track
// states share throughout the pipeline.
struct Box {
  double cx = 0.0;
  double cy = 0.0;
  double w = 0.0;
  double h = 0.0;

  double x1() const { return cx - w / 2.0; }
  double y1() const { return cy - h / 2.0; }
  double x2() const { return cx + w / 2.0; }
  double y2() const { return cy + h / 2.0; }
  double area() const { return w * h; }

  static Box from_corners(double x1, double y1, double x2, double y2) {
    return Box{(x1 + x2) / 2.0, (y1 + y2) / 2.0, x2 - x1, y2 - y1};
  }

  bool operator==(const Box&) const = default;
};

// Intersection over union; 0 for disjoint or degenerate boxes, exactly 1 for
// identical ones. Areas are taken from the corner coordinates so that the
// identical-box case cancels exactly in floating point.
inline double iou(const Box& a, const Box& b) {
  double ix = std::min(a.x2(), b.x2()) - std::max(a.x1(), b.x1());
  double iy = std::min(a.y2(), b.y2()) - std::max(a.y1(), b.y1());
  if (ix <= 0.0 || iy <= 0.0) return 0.0;
  double inter = ix * iy;
  double area_a = (a.x2() - a.x1()) * (a.y2() - a.y1());
  double area_b = (b.x2() - b.x1()) * (b.y2() - b.y1());
  double uni = area_a + area_b - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

}  // namespace motrack
