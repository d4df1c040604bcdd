#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "motrack/detection.hpp"
#include "motrack/pruning.hpp"
#include "motrack/tracking.hpp"

namespace motrack {

// One position sample of a ground-truth object or a bare trajectory, pixels.
struct TrackSample {
  int frame = 0;
  double x = 0.0;
  double y = 0.0;
};

// Manually annotated (or simulated) object paths keyed by id; frames strictly
// increase within each path.
struct GroundTruth {
  std::map<int, std::vector<TrackSample>> paths;

  int num_ids() const { return static_cast<int>(paths.size()); }
};

// CSV with header "id,frame,x,y" (pixels).
GroundTruth read_ground_truth(const std::string& path);
void write_ground_truth(const std::string& path, const GroundTruth& gt);

// Time-lagged diffusivity of one trajectory. For lag tau, D(tau) is the mean
// squared displacement over start times in the first window_seconds of the
// track, divided by 4*tau (2-D diffusion). Lags run up to
// min(track span, max_lag_seconds); lags with no sample pairs are skipped.
struct DiffusivityCurve {
  std::vector<double> tau;  // seconds, strictly increasing
  std::vector<double> d;    // µm²/s
  double peak_d = 0.0;
};

DiffusivityCurve diffusivity_curve(const std::vector<TrackSample>& samples, double fps,
                                   double pixel_scale_um, double window_seconds = 2.5,
                                   double max_lag_seconds = 1.0);

enum class MotilityClass { none = 0, low = 1, medium = 2, high = 3 };

const char* motility_name(MotilityClass c);

// Class boundaries on peak diffusivity, µm²/s, upper bounds inclusive.
struct MotilityThresholds {
  double none_max = 0.075;
  double low_max = 0.25;
  double medium_max = 1.0;
};

MotilityClass classify_motility(const DiffusivityCurve& curve,
                                const MotilityThresholds& thresholds = {});

// Average speed in µm/s as total path length over elapsed time. Only segments
// that start at a detected state contribute; coasted positions are filter
// guesses, not measurements.
double mean_speed(const std::vector<TrackState>& states, double fps, double pixel_scale_um);

// Same estimator for a raw trajectory, where every segment counts.
double mean_speed(const std::vector<TrackSample>& samples, double fps, double pixel_scale_um);

struct Metrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// precision = TP/(TP+FP), recall = TP/(TP+FN); each is 0 when its denominator
// is 0, and F1 is 0 when either is 0.
Metrics metrics_from_counts(long tp, long fp, long fn);

// Detection-to-GT matching: per frame, exact minimum-cost matching on center
// distance with gate radius_px (inclusive). Matched pairs are TP, leftover
// detections FP, leftover GT points FN.
struct MatchCounts {
  long tp = 0;
  long fp = 0;
  long fn = 0;
  double matched_distance = 0.0;  // summed distance over TP pairs
};

MatchCounts match_detections(const DetectionSet& dets, const GroundTruth& gt, double radius_px);

// Track-to-GT protocol: every detected state of a track votes for its nearest
// GT id within radius_px; the track is a true positive when one id collects
// at least `majority` of the detected-state votes. A GT id recovered by
// several tracks still counts once toward recall.
struct TrackMatchResult {
  std::vector<int> assigned_gt;        // per track: winning GT id, or -1 if not TP
  std::vector<std::uint8_t> is_tp;     // per track
  std::vector<int> recovered;          // sorted unique GT ids covered by TP tracks
  long tp_tracks = 0;
  double precision = 0.0;  // TP tracks / all tracks
  double recall = 0.0;     // recovered ids / total GT ids
};

TrackMatchResult match_tracks(const std::vector<Tracklet>& tracks, const GroundTruth& gt,
                              double radius_px, double majority = 0.5);

struct AnalyticsConfig {
  double radius_px = 15.0;
  double majority = 0.5;
  double window_seconds = 2.5;
  double max_lag_seconds = 1.0;
  MotilityThresholds motility;
};

// Everything the pipeline hands to the evaluation step.
struct PipelineStages {
  DetectionSet merged;
  DetectionSet after_area;
  DetectionSet after_confidence;
  DetectionSet after_nms;
  std::vector<Tracklet> tracks_raw;
  std::vector<Tracklet> tracks_final;
};

struct StageRow {
  std::string stage;
  long tp = 0;
  long fp = 0;
  long fn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct ClassFraction {
  MotilityClass cls = MotilityClass::none;
  int total = 0;     // GT ids in this class
  int detected = 0;  // of those, ids recovered by the final tracks
  double fraction = 0.0;
};

// Detection-level rows count individual detections; the two track-level rows
// count tracks for TP/FP and unrecovered GT ids for FN, with precision and
// recall as defined by match_tracks (they coincide with the count identities
// unless several tracks claim one GT id).
struct EvalReport {
  std::vector<StageRow> stages;
  std::array<ClassFraction, 4> class_fractions;
};

EvalReport stage_report(const PipelineStages& stages, const GroundTruth& gt,
                        const AnalyticsConfig& cfg, double fps, double pixel_scale_um);

// Confidence-threshold sweep on validation data. Both selection criteria are
// evaluated on the same curve; ties go to the higher threshold.
enum class CalibrationCriterion { max_precision, max_f1 };

struct CalibrationPoint {
  double threshold = 0.0;
  long tp = 0;
  long fp = 0;
  long fn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct LevelCalibration {
  Level level = Level::builtin;
  std::vector<CalibrationPoint> curve;  // one point per grid threshold
  double max_precision_threshold = 0.0;
  double max_f1_threshold = 0.0;
};

double chosen_threshold(const LevelCalibration& cal, CalibrationCriterion criterion);

// Sweeps thresholds {0.00, 0.01, ..., 1.00}; each candidate runs the full
// pruner (area, confidence at the candidate, NMS) before matching against GT.
std::vector<LevelCalibration> calibrate_thresholds(
    const std::map<Level, DetectionSet>& validation, const GroundTruth& gt,
    const PrunerConfig& base, double radius_px);

}  // namespace motrack
