#pragma once

#include <string>
#include <vector>

#include "motrack/analytics.hpp"
#include "motrack/config.hpp"
#include "motrack/imaging.hpp"
#include "motrack/tracking.hpp"

namespace motrack {

struct PipelineResult {
  PipelineStages stages;
  std::vector<Tracklet> tracks_final;  // convenience alias of stages.tracks_final
  EvalReport report;
  bool has_report = false;
  int num_frames = 0;
};

// Runs load -> features -> detect -> merge -> prune -> track -> filter ->
// analyze, writing every stage artifact into cfg.output_dir:
//   detections_merged.csv, detections_after_area.csv,
//   detections_after_confidence.csv, detections_after_nms.csv,
//   tracks_all.csv, tracks.csv, report.txt + report.json (with ground truth),
//   features/ and overlays/ when enabled, and pipeline_stage.txt recording
//   each completed stage (useful when a later stage fails).
// Errors carry the failing stage's name.
PipelineResult run_pipeline(const PipelineConfig& cfg);

void write_report_text(const std::string& path, const EvalReport& report);
void write_report_json(const std::string& path, const EvalReport& report);

// Per-level sweep table as CSV plus a summary of the chosen thresholds.
void write_calibration_curve(const std::string& path, const LevelCalibration& cal);
void write_calibration_summary(const std::string& path,
                               const std::vector<LevelCalibration>& cals);

// Frames with track boxes drawn on top, one PPM per frame. Detected states
// draw solid rectangles, coasted states dotted ones; colors cycle by id.
void write_overlays(const std::string& dir, const FrameSequence& seq,
                    const std::vector<Tracklet>& tracks);

}  // namespace motrack
