#include "motrack/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "motrack/errors.hpp"
#include "motrack/motion.hpp"
#include "motrack/netpbm.hpp"
#include "motrack/text.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace motrack {
namespace {

// Wraps a stage so failures name it; the marker file tracks what completed.
class StageRunner {
public:
  explicit StageRunner(const std::string& marker_path) : marker_(marker_path) {
    std::ofstream out(marker_path, std::ios::trunc);
    if (!out) throw io_error("cannot write stage marker: " + marker_path);
    out << "started\n";
  }

  template <typename Fn>
  void run(const std::string& name, Fn&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      throw Error(e.code(), "stage '" + name + "': " + e.what());
    }
    std::ofstream out(marker_, std::ios::app);
    out << "completed: " << name << "\n";
  }

private:
  std::string marker_;
};

std::string fmt_fixed(double v) {
  // Reports print a compact fixed form; exact round-trip stays in the CSVs.
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

void draw_box(ImageU8& r, ImageU8& g, ImageU8& b, const Box& box, int color_idx, bool dotted) {
  static const std::uint8_t palette[8][3] = {
      {230, 80, 80},  {80, 200, 120}, {90, 140, 255}, {240, 200, 60},
      {200, 90, 220}, {70, 210, 210}, {250, 140, 50}, {160, 160, 160}};
  const std::uint8_t* c = palette[color_idx % 8];
  int x1 = static_cast<int>(std::lround(box.x1()));
  int y1 = static_cast<int>(std::lround(box.y1()));
  int x2 = static_cast<int>(std::lround(box.x2()));
  int y2 = static_cast<int>(std::lround(box.y2()));
  auto plot = [&](int x, int y, int step) {
    if (x < 0 || y < 0 || x >= r.width || y >= r.height) return;
    if (dotted && step % 3 != 0) return;
    r.at(x, y) = c[0];
    g.at(x, y) = c[1];
    b.at(x, y) = c[2];
  };
  for (int x = x1; x <= x2; ++x) {
    plot(x, y1, x - x1);
    plot(x, y2, x - x1);
  }
  for (int y = y1; y <= y2; ++y) {
    plot(x1, y, y - y1);
    plot(x2, y, y - y1);
  }
}

}  // namespace

void write_report_text(const std::string& path, const EvalReport& report) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot write report: " + path);
  out << "stage               tp      fp      fn      precision  recall     f1\n";
  for (const StageRow& row : report.stages) {
    char line[160];
    std::snprintf(line, sizeof(line), "%-19s %-7ld %-7ld %-7ld %-10s %-10s %s\n",
                  row.stage.c_str(), row.tp, row.fp, row.fn, fmt_fixed(row.precision).c_str(),
                  fmt_fixed(row.recall).c_str(), fmt_fixed(row.f1).c_str());
    out << line;
  }
  out << "\nmotility fractions (ground-truth ids recovered by final tracks)\n";
  for (const ClassFraction& f : report.class_fractions)
    out << motility_name(f.cls) << ": " << f.detected << " / " << f.total << " = "
        << fmt_fixed(f.fraction) << "\n";
  if (!out) throw io_error("failed writing report: " + path);
}

void write_report_json(const std::string& path, const EvalReport& report) {
  ordered_json j;
  j["stages"] = ordered_json::array();
  for (const StageRow& row : report.stages) {
    ordered_json r;
    r["stage"] = row.stage;
    r["tp"] = row.tp;
    r["fp"] = row.fp;
    r["fn"] = row.fn;
    r["precision"] = row.precision;
    r["recall"] = row.recall;
    r["f1"] = row.f1;
    j["stages"].push_back(std::move(r));
  }
  j["motility_fractions"] = ordered_json::array();
  for (const ClassFraction& f : report.class_fractions) {
    ordered_json r;
    r["class"] = motility_name(f.cls);
    r["total"] = f.total;
    r["detected"] = f.detected;
    r["fraction"] = f.fraction;
    j["motility_fractions"].push_back(std::move(r));
  }
  std::ofstream out(path);
  if (!out) throw io_error("cannot write report: " + path);
  out << j.dump(2) << "\n";
  if (!out) throw io_error("failed writing report: " + path);
}

void write_calibration_curve(const std::string& path, const LevelCalibration& cal) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot write calibration curve: " + path);
  out << "threshold,tp,fp,fn,precision,recall,f1\n";
  for (const CalibrationPoint& p : cal.curve)
    out << fmt_double(p.threshold) << ',' << p.tp << ',' << p.fp << ',' << p.fn << ','
        << fmt_double(p.precision) << ',' << fmt_double(p.recall) << ',' << fmt_double(p.f1)
        << "\n";
  if (!out) throw io_error("failed writing calibration curve: " + path);
}

void write_calibration_summary(const std::string& path,
                               const std::vector<LevelCalibration>& cals) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot write calibration summary: " + path);
  out << "level,max_precision_threshold,max_f1_threshold\n";
  for (const LevelCalibration& cal : cals)
    out << level_name(cal.level) << ',' << fmt_double(cal.max_precision_threshold) << ','
        << fmt_double(cal.max_f1_threshold) << "\n";
  if (!out) throw io_error("failed writing calibration summary: " + path);
}

void write_overlays(const std::string& dir, const FrameSequence& seq,
                    const std::vector<Tracklet>& tracks) {
  fs::create_directories(dir);

  // Index track states per frame once.
  std::vector<std::vector<std::pair<int, const TrackState*>>> per_frame(seq.num_frames());
  for (const Tracklet& t : tracks)
    for (const TrackState& s : t.states)
      if (s.frame >= 0 && s.frame < seq.num_frames())
        per_frame[s.frame].emplace_back(t.id, &s);

  for (int f = 0; f < seq.num_frames(); ++f) {
    ImageU8 r = seq.frames[f], g = seq.frames[f], b = seq.frames[f];
    for (const auto& [id, state] : per_frame[f])
      draw_box(r, g, b, state->box, id, state->source == StateSource::interpolated);
    write_ppm((fs::path(dir) / frame_filename("overlay_%05d.ppm", f)).string(), r, g, b);
  }
}

PipelineResult run_pipeline(const PipelineConfig& cfg) {
  // Validate before any heavy work or output.
  if (cfg.manifest.empty()) throw config_error("pipeline config: manifest is required");
  if (cfg.detection_files.empty() && !cfg.builtin_enabled)
    throw config_error("pipeline config: no detection source configured");
  if (cfg.output_dir.empty()) throw config_error("pipeline config: output_dir is required");
  if (!fs::exists(cfg.manifest)) throw io_error("manifest not found: " + cfg.manifest);
  for (const auto& [level, file] : cfg.detection_files)
    if (!fs::exists(file))
      throw io_error(std::string("detection file for level '") + level_name(level) +
                     "' not found: " + file);
  if (!cfg.ground_truth.empty() && !fs::exists(cfg.ground_truth))
    throw io_error("ground-truth file not found: " + cfg.ground_truth);

  fs::create_directories(cfg.output_dir);
  const fs::path out_dir(cfg.output_dir);
  StageRunner stages((out_dir / "pipeline_stage.txt").string());

  PipelineResult result;
  FrameSequence seq;
  stages.run("load", [&] {
    SequenceManifest manifest = read_manifest(cfg.manifest);
    seq = load_sequence(manifest, cfg.manifest);
  });
  result.num_frames = seq.num_frames();

  const bool need_features = cfg.builtin_enabled || cfg.write_features;
  std::vector<FeatureStack> feature_stacks;
  if (need_features) {
    stages.run("features", [&] {
      feature_stacks = build_feature_stack(seq, cfg.flow_window, cfg.presmooth_sigma);
      if (cfg.write_features) {
        fs::path dir = out_dir / "features";
        fs::create_directories(dir);
        for (int t = 0; t < static_cast<int>(feature_stacks.size()); ++t)
          write_ppm((dir / frame_filename("features_%05d.ppm", t)).string(),
                    feature_stacks[t].intensity, feature_stacks[t].flow,
                    feature_stacks[t].deviation);
      }
    });
  }

  DetectionSet merged;
  stages.run("detect", [&] {
    std::vector<DetectionSet> sources;
    for (const auto& [level, file] : cfg.detection_files)
      sources.push_back(read_detections(file, level));
    if (cfg.builtin_enabled) sources.push_back(blob_detect(feature_stacks, cfg.builtin));
    merged = merge_levels(sources);
    if (merged.num_frames() > seq.num_frames())
      throw config_error("detections reference frames beyond the sequence");
    merged.resize_frames(seq.num_frames());
    write_detections((out_dir / "detections_merged.csv").string(), merged);
  });

  stages.run("prune", [&] {
    result.stages.merged = merged;
    result.stages.after_area = area_filter(merged, cfg.pruner.max_box_area);
    write_detections((out_dir / "detections_after_area.csv").string(),
                     result.stages.after_area);
    result.stages.after_confidence =
        confidence_filter(result.stages.after_area, cfg.pruner.confidence_thresholds);
    write_detections((out_dir / "detections_after_confidence.csv").string(),
                     result.stages.after_confidence);
    result.stages.after_nms = nms(result.stages.after_confidence, cfg.pruner.nms_iou);
    write_detections((out_dir / "detections_after_nms.csv").string(), result.stages.after_nms);
  });

  stages.run("track", [&] {
    result.stages.tracks_raw = track(result.stages.after_nms, cfg.tracker, seq.num_frames());
    write_tracks((out_dir / "tracks_all.csv").string(), result.stages.tracks_raw);
    result.stages.tracks_final =
        track_length_filter(result.stages.tracks_raw, cfg.tracker.min_track_length);
    write_tracks((out_dir / "tracks.csv").string(), result.stages.tracks_final);
    result.tracks_final = result.stages.tracks_final;
  });

  if (!cfg.ground_truth.empty()) {
    stages.run("analyze", [&] {
      GroundTruth gt = read_ground_truth(cfg.ground_truth);
      result.report =
          stage_report(result.stages, gt, cfg.analytics, seq.fps, seq.pixel_scale_um);
      result.has_report = true;
      write_report_text((out_dir / "report.txt").string(), result.report);
      write_report_json((out_dir / "report.json").string(), result.report);
    });
  }

  if (cfg.write_overlays) {
    stages.run("overlays", [&] {
      write_overlays((out_dir / "overlays").string(), seq, result.stages.tracks_final);
    });
  }

  stages.run("done", [] {});
  return result;
}

}  // namespace motrack
