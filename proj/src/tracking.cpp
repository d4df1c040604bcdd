#include "motrack/tracking.hpp"

#include <algorithm>
#include <fstream>

#include "motrack/assignment.hpp"
#include "motrack/errors.hpp"
#include "motrack/text.hpp"

namespace motrack {
namespace {

constexpr const char* kCsvHeader = "track_id,frame,cx,cy,w,h,interpolated";

struct LiveTrack {
  int id = 0;
  KalmanState kf;
  std::vector<TrackState> states;
  int misses = 0;
};

// A track must end on a detection; coasted tail states were never confirmed.
void trim_trailing_interpolated(std::vector<TrackState>& states) {
  while (!states.empty() && states.back().source == StateSource::interpolated)
    states.pop_back();
}

}  // namespace

std::vector<Tracklet> track(const DetectionSet& detections, const TrackerConfig& cfg,
                            int num_frames) {
  if (num_frames < 0) throw config_error("tracker needs num_frames >= 0");
  if (cfg.max_age < 0) throw config_error("tracker max_age must be >= 0");
  if (!(cfg.iou_match_threshold >= 0.0 && cfg.iou_match_threshold <= 1.0))
    throw config_error("tracker iou_match_threshold must be in [0, 1]");
  if (detections.num_frames() > num_frames)
    throw config_error("detections extend past the frame range given to the tracker");

  std::vector<LiveTrack> live;
  std::vector<Tracklet> finished;
  int next_id = 1;

  for (int t = 0; t < num_frames; ++t) {
    for (LiveTrack& lt : live) lt.kf = kalman_predict(lt.kf, cfg.kalman);

    std::vector<Box> predicted(live.size());
    for (std::size_t i = 0; i < live.size(); ++i) predicted[i] = kalman_state_box(live[i].kf);

    const auto& dets = detections.frame(t);
    std::vector<Box> det_boxes(dets.size());
    for (std::size_t j = 0; j < dets.size(); ++j) det_boxes[j] = dets[j].box;

    Association assoc = associate(predicted, det_boxes, cfg.iou_match_threshold);

    for (auto [ti, di] : assoc.matches) {
      LiveTrack& lt = live[ti];
      lt.kf = kalman_update(lt.kf, dets[di].box, cfg.kalman);
      lt.states.push_back({t, dets[di].box, StateSource::detected});
      lt.misses = 0;
    }

    std::vector<std::size_t> dead;
    for (int ti : assoc.unmatched_tracks) {
      LiveTrack& lt = live[ti];
      ++lt.misses;
      if (lt.misses > cfg.max_age) {
        dead.push_back(static_cast<std::size_t>(ti));
      } else {
        lt.states.push_back({t, predicted[ti], StateSource::interpolated});
      }
    }

    if (!dead.empty()) {
      std::sort(dead.begin(), dead.end());
      std::vector<LiveTrack> survivors;
      survivors.reserve(live.size() - dead.size());
      std::size_t di = 0;
      for (std::size_t i = 0; i < live.size(); ++i) {
        if (di < dead.size() && dead[di] == i) {
          trim_trailing_interpolated(live[i].states);
          finished.push_back({live[i].id, std::move(live[i].states)});
          ++di;
        } else {
          survivors.push_back(std::move(live[i]));
        }
      }
      live = std::move(survivors);
    }

    for (int di : assoc.unmatched_detections) {
      LiveTrack lt;
      lt.id = next_id++;
      lt.kf = kalman_init(dets[di].box, cfg.kalman);
      lt.states.push_back({t, dets[di].box, StateSource::detected});
      live.push_back(std::move(lt));
    }
  }

  for (LiveTrack& lt : live) {
    trim_trailing_interpolated(lt.states);
    finished.push_back({lt.id, std::move(lt.states)});
  }

  std::sort(finished.begin(), finished.end(),
            [](const Tracklet& a, const Tracklet& b) { return a.id < b.id; });
  return finished;
}

std::vector<Tracklet> track_length_filter(const std::vector<Tracklet>& tracks, int min_length) {
  if (min_length < 1) throw config_error("min track length must be >= 1");
  std::vector<Tracklet> out;
  for (const Tracklet& t : tracks)
    if (t.length() >= min_length) out.push_back(t);
  return out;
}

void write_tracks(const std::string& path, const std::vector<Tracklet>& tracks) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot write track file: " + path);
  out << kCsvHeader << "\n";
  for (const Tracklet& t : tracks)
    for (const TrackState& s : t.states)
      out << t.id << ',' << s.frame << ',' << fmt_double(s.box.cx) << ','
          << fmt_double(s.box.cy) << ',' << fmt_double(s.box.w) << ',' << fmt_double(s.box.h)
          << ',' << (s.source == StateSource::interpolated ? 1 : 0) << "\n";
  if (!out) throw io_error("failed writing track file: " + path);
}

std::vector<Tracklet> read_tracks(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open track file: " + path);

  std::string line;
  if (!std::getline(in, line)) return {};
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader)
    throw format_error(path + ": expected header '" + std::string(kCsvHeader) + "', got '" +
                       line + "'");

  std::vector<Tracklet> tracks;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::string context = path + ":" + std::to_string(lineno);

    std::vector<std::string_view> fields;
    std::string_view sv = line;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= sv.size(); ++i) {
      if (i == sv.size() || sv[i] == ',') {
        fields.push_back(sv.substr(start, i - start));
        start = i + 1;
      }
    }
    if (fields.size() != 7)
      throw format_error(context + ": expected 7 fields, got " + std::to_string(fields.size()));

    int id = static_cast<int>(parse_long(fields[0], context));
    TrackState s;
    s.frame = static_cast<int>(parse_long(fields[1], context));
    s.box.cx = parse_double(fields[2], context);
    s.box.cy = parse_double(fields[3], context);
    s.box.w = parse_double(fields[4], context);
    s.box.h = parse_double(fields[5], context);
    long interp = parse_long(fields[6], context);
    if (interp != 0 && interp != 1)
      throw format_error(context + ": interpolated flag must be 0 or 1");
    s.source = interp ? StateSource::interpolated : StateSource::detected;
    if (!(s.box.w > 0.0) || !(s.box.h > 0.0))
      throw format_error(context + ": box size must be positive");

    if (tracks.empty() || tracks.back().id != id) {
      for (const Tracklet& t : tracks)
        if (t.id == id)
          throw format_error(context + ": rows of track " + std::to_string(id) +
                             " are not contiguous");
      tracks.push_back({id, {}});
    } else if (s.frame != tracks.back().last_frame() + 1) {
      throw format_error(context + ": track " + std::to_string(id) +
                         " frames are not consecutive");
    }
    tracks.back().states.push_back(s);
  }

  for (const Tracklet& t : tracks) {
    if (t.states.empty()) continue;
    if (t.states.front().source != StateSource::detected ||
        t.states.back().source != StateSource::detected)
      throw format_error(path + ": track " + std::to_string(t.id) +
                         " must start and end on detected states");
  }
  return tracks;
}

}  // namespace motrack
