#pragma once

#include <string>
#include <vector>

#include "motrack/detection.hpp"
#include "motrack/kalman.hpp"

namespace motrack {

enum class StateSource { detected, interpolated };

struct TrackState {
  int frame = 0;
  Box box;
  StateSource source = StateSource::detected;
};

// One object's trajectory: consecutive frames, starting and ending with a
// detected state; interpolated states fill detection gaps in between.
struct Tracklet {
  int id = 0;
  std::vector<TrackState> states;

  int first_frame() const { return states.front().frame; }
  int last_frame() const { return states.back().frame; }
  // Length counts frames spanned, including interpolated ones.
  int length() const { return states.empty() ? 0 : last_frame() - first_frame() + 1; }
};

struct TrackerConfig {
  // A track survives this many consecutive missed frames on Kalman
  // prediction alone; one more miss terminates it.
  int max_age = 25;
  // Minimum IoU between a predicted box and a detection for a valid match.
  double iou_match_threshold = 0.3;
  // Tracks spanning fewer frames than this are discarded as spurious.
  // Media with slower objects warrant a longer minimum (e.g. 60 at 60 fps in
  // collagen, 30 in aqueous media).
  int min_track_length = 60;
  KalmanConfig kalman;
};

// Tracking by detection over frames [0, num_frames): predict every live
// track, match predictions to the frame's detections by IoU, update matched
// filters with the detection (the stored state is the detection box itself),
// coast unmatched tracks on the predicted box, and start new tracks on
// unmatched detections. Track ids count up from 1 in creation order.
std::vector<Tracklet> track(const DetectionSet& detections, const TrackerConfig& cfg,
                            int num_frames);

std::vector<Tracklet> track_length_filter(const std::vector<Tracklet>& tracks, int min_length);

// CSV with header "track_id,frame,cx,cy,w,h,interpolated"; rows grouped by
// track, frames ascending. Read validates that shape.
void write_tracks(const std::string& path, const std::vector<Tracklet>& tracks);
std::vector<Tracklet> read_tracks(const std::string& path);

}  // namespace motrack
