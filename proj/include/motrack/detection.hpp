#pragma once

#include <string>
#include <vector>

#include "motrack/box.hpp"
#include "motrack/motion.hpp"

namespace motrack {

// Origin of a detection: one of the three external detector sensitivity
// levels, or the built-in blob detector.
enum class Level { low = 0, medium = 1, high = 2, builtin = 3 };

constexpr int kNumLevels = 4;

const char* level_name(Level level);
Level parse_level(const std::string& name);

struct Detection {
  int frame = 0;
  Box box;
  double confidence = 1.0;
  Level level = Level::builtin;

  bool operator==(const Detection&) const = default;
};

// Detections grouped by frame; frame t's list is storage order, which every
// stage preserves so runs stay reproducible.
class DetectionSet {
public:
  DetectionSet() = default;
  explicit DetectionSet(int num_frames) : frames_(num_frames) {}

  void add(const Detection& d);
  int num_frames() const { return static_cast<int>(frames_.size()); }
  void resize_frames(int n);

  // Safe for any t >= 0; frames beyond the stored range are empty.
  const std::vector<Detection>& frame(int t) const;

  std::size_t total() const;
  std::vector<Detection> flatten() const;

  bool operator==(const DetectionSet&) const = default;

private:
  std::vector<std::vector<Detection>> frames_;
};

// CSV with header "frame,cx,cy,w,h,confidence". Doubles are written in
// shortest round-trip form, so write/read is lossless.
DetectionSet read_detections(const std::string& path, Level level);
void write_detections(const std::string& path, const DetectionSet& set);

// Concatenates per frame, in the order the sets are given.
DetectionSet merge_levels(const std::vector<DetectionSet>& sets);

// Classical fallback detector on the deviation channel: threshold, connected
// components (8-neighbour), area gate, centroid. Boxes get a fixed size and
// the mean deviation inside the component (scaled to [0, 1]) as confidence.
struct BlobParams {
  int threshold = 60;        // deviation strictly above this is foreground
  int min_area = 4;          // inclusive bounds on component pixel count
  int max_area = 400;
  double box_size = 30.0;
};

DetectionSet blob_detect(const std::vector<FeatureStack>& stacks, const BlobParams& params);

}  // namespace motrack
