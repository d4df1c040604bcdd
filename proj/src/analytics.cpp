#include "motrack/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_map>

#include "motrack/assignment.hpp"
#include "motrack/errors.hpp"
#include "motrack/text.hpp"

namespace motrack {
namespace {

constexpr const char* kGtHeader = "id,frame,x,y";

struct GtPoint {
  int id = 0;
  double x = 0.0;
  double y = 0.0;
};

// Per-frame view of the ground truth, points ordered by id.
std::map<int, std::vector<GtPoint>> frame_index(const GroundTruth& gt) {
  std::map<int, std::vector<GtPoint>> idx;
  for (const auto& [id, samples] : gt.paths)
    for (const TrackSample& s : samples) idx[s.frame].push_back({id, s.x, s.y});
  return idx;
}

double dist2(double ax, double ay, double bx, double by) {
  double dx = ax - bx, dy = ay - by;
  return dx * dx + dy * dy;
}

}  // namespace

GroundTruth read_ground_truth(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open ground-truth file: " + path);

  std::string line;
  if (!std::getline(in, line)) return {};
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kGtHeader)
    throw format_error(path + ": expected header '" + std::string(kGtHeader) + "', got '" +
                       line + "'");

  GroundTruth gt;
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
    if (fields.size() != 4)
      throw format_error(context + ": expected 4 fields, got " + std::to_string(fields.size()));

    int id = static_cast<int>(parse_long(fields[0], context));
    TrackSample s;
    s.frame = static_cast<int>(parse_long(fields[1], context));
    s.x = parse_double(fields[2], context);
    s.y = parse_double(fields[3], context);
    if (s.frame < 0) throw format_error(context + ": frame index must be >= 0");

    auto& samples = gt.paths[id];
    if (!samples.empty() && s.frame <= samples.back().frame)
      throw format_error(context + ": frames of id " + std::to_string(id) +
                         " must strictly increase");
    samples.push_back(s);
  }
  return gt;
}

void write_ground_truth(const std::string& path, const GroundTruth& gt) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot write ground-truth file: " + path);
  out << kGtHeader << "\n";
  for (const auto& [id, samples] : gt.paths)
    for (const TrackSample& s : samples)
      out << id << ',' << s.frame << ',' << fmt_double(s.x) << ',' << fmt_double(s.y) << "\n";
  if (!out) throw io_error("failed writing ground-truth file: " + path);
}

DiffusivityCurve diffusivity_curve(const std::vector<TrackSample>& samples, double fps,
                                   double pixel_scale_um, double window_seconds,
                                   double max_lag_seconds) {
  if (samples.size() < 2) throw config_error("diffusivity needs at least two samples");
  if (!(fps > 0.0) || !(pixel_scale_um > 0.0))
    throw config_error("diffusivity needs positive fps and pixel scale");
  for (std::size_t i = 1; i < samples.size(); ++i)
    if (samples[i].frame <= samples[i - 1].frame)
      throw config_error("diffusivity samples must have strictly increasing frames");

  const int first = samples.front().frame;
  const int span = samples.back().frame - first;
  const double span_seconds = span / fps;

  std::unordered_map<int, std::size_t> by_frame;
  by_frame.reserve(samples.size() * 2);
  for (std::size_t i = 0; i < samples.size(); ++i) by_frame[samples[i].frame] = i;

  // Start positions must lie within the opening window of the track.
  const int max_start = static_cast<int>(std::floor(window_seconds * fps + 1e-9));
  const int max_lag =
      std::max(0, static_cast<int>(std::floor(std::min(span_seconds, max_lag_seconds) * fps +
                                              1e-9)));

  DiffusivityCurve curve;
  for (int k = 1; k <= max_lag; ++k) {
    double sum = 0.0;
    long count = 0;
    for (const TrackSample& s : samples) {
      if (s.frame - first > max_start) break;  // samples are frame-ordered
      auto it = by_frame.find(s.frame + k);
      if (it == by_frame.end()) continue;
      const TrackSample& e = samples[it->second];
      double dx = (e.x - s.x) * pixel_scale_um;
      double dy = (e.y - s.y) * pixel_scale_um;
      sum += dx * dx + dy * dy;
      ++count;
    }
    if (count == 0) continue;
    double tau = k / fps;
    curve.tau.push_back(tau);
    curve.d.push_back(sum / count / (4.0 * tau));
  }
  for (double d : curve.d) curve.peak_d = std::max(curve.peak_d, d);
  return curve;
}

const char* motility_name(MotilityClass c) {
  switch (c) {
    case MotilityClass::none: return "none";
    case MotilityClass::low: return "low";
    case MotilityClass::medium: return "medium";
    case MotilityClass::high: return "high";
  }
  throw config_error("unknown motility class");
}

MotilityClass classify_motility(const DiffusivityCurve& curve,
                                const MotilityThresholds& thresholds) {
  if (curve.d.empty()) throw config_error("cannot classify an empty diffusivity curve");
  if (!(thresholds.none_max <= thresholds.low_max && thresholds.low_max <= thresholds.medium_max))
    throw config_error("motility thresholds must be non-decreasing");
  if (curve.peak_d <= thresholds.none_max) return MotilityClass::none;
  if (curve.peak_d <= thresholds.low_max) return MotilityClass::low;
  if (curve.peak_d <= thresholds.medium_max) return MotilityClass::medium;
  return MotilityClass::high;
}

double mean_speed(const std::vector<TrackState>& states, double fps, double pixel_scale_um) {
  if (states.size() < 2) throw config_error("speed needs at least two states");
  if (!(fps > 0.0) || !(pixel_scale_um > 0.0))
    throw config_error("speed needs positive fps and pixel scale");
  double path = 0.0, time = 0.0;
  for (std::size_t i = 0; i + 1 < states.size(); ++i) {
    if (states[i].source != StateSource::detected) continue;
    path += std::sqrt(dist2(states[i].box.cx, states[i].box.cy, states[i + 1].box.cx,
                            states[i + 1].box.cy)) *
            pixel_scale_um;
    time += (states[i + 1].frame - states[i].frame) / fps;
  }
  if (time <= 0.0) throw config_error("speed has no detected segments to measure");
  return path / time;
}

double mean_speed(const std::vector<TrackSample>& samples, double fps, double pixel_scale_um) {
  if (samples.size() < 2) throw config_error("speed needs at least two samples");
  if (!(fps > 0.0) || !(pixel_scale_um > 0.0))
    throw config_error("speed needs positive fps and pixel scale");
  double path = 0.0, time = 0.0;
  for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
    path += std::sqrt(dist2(samples[i].x, samples[i].y, samples[i + 1].x, samples[i + 1].y)) *
            pixel_scale_um;
    time += (samples[i + 1].frame - samples[i].frame) / fps;
  }
  return path / time;
}

Metrics metrics_from_counts(long tp, long fp, long fn) {
  if (tp < 0 || fp < 0 || fn < 0) throw config_error("confusion counts must be nonnegative");
  Metrics m;
  if (tp + fp > 0) m.precision = static_cast<double>(tp) / (tp + fp);
  if (tp + fn > 0) m.recall = static_cast<double>(tp) / (tp + fn);
  if (m.precision > 0.0 && m.recall > 0.0)
    m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
  return m;
}

MatchCounts match_detections(const DetectionSet& dets, const GroundTruth& gt, double radius_px) {
  if (!(radius_px > 0.0)) throw config_error("matching radius must be > 0");

  auto gt_frames = frame_index(gt);
  int last_frame = dets.num_frames() - 1;
  if (!gt_frames.empty()) last_frame = std::max(last_frame, gt_frames.rbegin()->first);

  MatchCounts out;
  static const std::vector<GtPoint> kNoGt;
  for (int t = 0; t <= last_frame; ++t) {
    const auto& d = dets.frame(t);
    auto it = gt_frames.find(t);
    const auto& g = it == gt_frames.end() ? kNoGt : it->second;
    const int nd = static_cast<int>(d.size());
    const int ng = static_cast<int>(g.size());
    if (nd == 0 && ng == 0) continue;

    // Square padded matrix: real pairs cost their distance when gated,
    // everything else the forbidden cost. The exact solver then yields the
    // maximum number of gated matches at minimum total distance.
    const int n = std::max(nd, ng);
    std::vector<double> cost(static_cast<std::size_t>(n) * n, kForbiddenCost);
    for (int i = 0; i < nd; ++i) {
      for (int j = 0; j < ng; ++j) {
        double dd = std::sqrt(dist2(d[i].box.cx, d[i].box.cy, g[j].x, g[j].y));
        if (dd <= radius_px) cost[static_cast<std::size_t>(i) * n + j] = dd;
      }
    }
    std::vector<int> match = min_cost_assignment(cost, n, n);
    long tp = 0;
    for (int i = 0; i < nd; ++i) {
      int j = match[i];
      if (j >= 0 && j < ng && cost[static_cast<std::size_t>(i) * n + j] < kForbiddenCost) {
        ++tp;
        out.matched_distance += cost[static_cast<std::size_t>(i) * n + j];
      }
    }
    out.tp += tp;
    out.fp += nd - tp;
    out.fn += ng - tp;
  }
  return out;
}

TrackMatchResult match_tracks(const std::vector<Tracklet>& tracks, const GroundTruth& gt,
                              double radius_px, double majority) {
  if (!(radius_px > 0.0)) throw config_error("matching radius must be > 0");
  if (!(majority >= 0.5 && majority <= 1.0))
    throw config_error("majority fraction must be in [0.5, 1]");

  auto gt_frames = frame_index(gt);

  TrackMatchResult out;
  out.assigned_gt.assign(tracks.size(), -1);
  out.is_tp.assign(tracks.size(), 0);

  std::vector<int> recovered;
  for (std::size_t ti = 0; ti < tracks.size(); ++ti) {
    const Tracklet& tr = tracks[ti];
    long detected = 0;
    std::map<int, long> votes;
    for (const TrackState& s : tr.states) {
      if (s.source != StateSource::detected) continue;
      ++detected;
      auto it = gt_frames.find(s.frame);
      if (it == gt_frames.end()) continue;
      int best_id = -1;
      double best_d2 = radius_px * radius_px;
      // Points are id-ordered, and only a strictly smaller distance replaces
      // the candidate, so distance ties resolve to the smaller id.
      for (const GtPoint& p : it->second) {
        double dd = dist2(s.box.cx, s.box.cy, p.x, p.y);
        if (dd < best_d2 || (dd == best_d2 && best_id == -1)) {
          best_d2 = dd;
          best_id = p.id;
        }
      }
      if (best_id >= 0) ++votes[best_id];
    }

    int winner = -1;
    long winner_votes = 0;
    for (const auto& [id, n] : votes) {
      if (n > winner_votes) {
        winner = id;
        winner_votes = n;
      }
    }
    if (detected > 0 && winner >= 0 &&
        static_cast<double>(winner_votes) + 1e-9 >= majority * static_cast<double>(detected)) {
      out.is_tp[ti] = 1;
      out.assigned_gt[ti] = winner;
      ++out.tp_tracks;
      recovered.push_back(winner);
    }
  }

  std::sort(recovered.begin(), recovered.end());
  recovered.erase(std::unique(recovered.begin(), recovered.end()), recovered.end());
  out.recovered = std::move(recovered);
  if (!tracks.empty())
    out.precision = static_cast<double>(out.tp_tracks) / static_cast<double>(tracks.size());
  if (gt.num_ids() > 0)
    out.recall = static_cast<double>(out.recovered.size()) / static_cast<double>(gt.num_ids());
  return out;
}

namespace {

StageRow detection_row(const std::string& name, const DetectionSet& set, const GroundTruth& gt,
                       double radius_px) {
  MatchCounts c = match_detections(set, gt, radius_px);
  Metrics m = metrics_from_counts(c.tp, c.fp, c.fn);
  return {name, c.tp, c.fp, c.fn, m.precision, m.recall, m.f1};
}

StageRow track_row(const std::string& name, const std::vector<Tracklet>& tracks,
                   const GroundTruth& gt, const AnalyticsConfig& cfg,
                   TrackMatchResult* result_out) {
  TrackMatchResult r = match_tracks(tracks, gt, cfg.radius_px, cfg.majority);
  StageRow row;
  row.stage = name;
  row.tp = r.tp_tracks;
  row.fp = static_cast<long>(tracks.size()) - r.tp_tracks;
  row.fn = static_cast<long>(gt.num_ids()) - static_cast<long>(r.recovered.size());
  row.precision = r.precision;
  row.recall = r.recall;
  row.f1 = (row.precision > 0.0 && row.recall > 0.0)
               ? 2.0 * row.precision * row.recall / (row.precision + row.recall)
               : 0.0;
  if (result_out) *result_out = std::move(r);
  return row;
}

}  // namespace

EvalReport stage_report(const PipelineStages& stages, const GroundTruth& gt,
                        const AnalyticsConfig& cfg, double fps, double pixel_scale_um) {
  EvalReport report;
  report.stages.push_back(detection_row("detections", stages.merged, gt, cfg.radius_px));
  report.stages.push_back(detection_row("area_filter", stages.after_area, gt, cfg.radius_px));
  report.stages.push_back(
      detection_row("confidence_filter", stages.after_confidence, gt, cfg.radius_px));
  report.stages.push_back(detection_row("nms", stages.after_nms, gt, cfg.radius_px));

  report.stages.push_back(track_row("tracking", stages.tracks_raw, gt, cfg, nullptr));
  TrackMatchResult final_match;
  report.stages.push_back(
      track_row("track_length_filter", stages.tracks_final, gt, cfg, &final_match));

  for (int c = 0; c < 4; ++c) report.class_fractions[c].cls = static_cast<MotilityClass>(c);
  for (const auto& [id, samples] : gt.paths) {
    MotilityClass cls = MotilityClass::none;
    if (samples.size() >= 2) {
      DiffusivityCurve curve = diffusivity_curve(samples, fps, pixel_scale_um,
                                                 cfg.window_seconds, cfg.max_lag_seconds);
      if (!curve.d.empty()) cls = classify_motility(curve, cfg.motility);
    }
    auto& frac = report.class_fractions[static_cast<int>(cls)];
    ++frac.total;
    if (std::binary_search(final_match.recovered.begin(), final_match.recovered.end(), id))
      ++frac.detected;
  }
  for (auto& frac : report.class_fractions)
    frac.fraction = frac.total > 0 ? static_cast<double>(frac.detected) / frac.total : 0.0;
  return report;
}

double chosen_threshold(const LevelCalibration& cal, CalibrationCriterion criterion) {
  return criterion == CalibrationCriterion::max_precision ? cal.max_precision_threshold
                                                          : cal.max_f1_threshold;
}

std::vector<LevelCalibration> calibrate_thresholds(
    const std::map<Level, DetectionSet>& validation, const GroundTruth& gt,
    const PrunerConfig& base, double radius_px) {
  if (validation.empty()) throw config_error("calibration needs at least one detection level");

  std::vector<LevelCalibration> out;
  for (const auto& [level, set] : validation) {
    if (set.total() == 0)
      throw config_error(std::string("calibration level '") + level_name(level) +
                         "' has no detections");

    LevelCalibration cal;
    cal.level = level;
    bool any_survivor = false;
    for (int i = 0; i <= 100; ++i) {
      double thr = i / 100.0;
      PrunerConfig cfg = base;
      for (auto& kv : cfg.confidence_thresholds) kv.second = 0.0;
      cfg.confidence_thresholds[level] = thr;
      DetectionSet pruned = prune(set, cfg);
      any_survivor = any_survivor || pruned.total() > 0;
      MatchCounts c = match_detections(pruned, gt, radius_px);
      Metrics m = metrics_from_counts(c.tp, c.fp, c.fn);
      cal.curve.push_back({thr, c.tp, c.fp, c.fn, m.precision, m.recall, m.f1});
    }
    if (!any_survivor)
      throw config_error(std::string("calibration level '") + level_name(level) +
                         "' keeps no detections at any threshold");

    double best_p = -1.0, best_f1 = -1.0;
    for (const CalibrationPoint& p : cal.curve) {
      if (p.precision >= best_p) {
        best_p = p.precision;
        cal.max_precision_threshold = p.threshold;
      }
      if (p.f1 >= best_f1) {
        best_f1 = p.f1;
        cal.max_f1_threshold = p.threshold;
      }
    }
    out.push_back(std::move(cal));
  }
  return out;
}

}  // namespace motrack
