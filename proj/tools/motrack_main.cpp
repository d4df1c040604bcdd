// Command-line front end: every pipeline stage as a subcommand, plus `run`
// for the whole chain driven by one JSON config.

#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "motrack/analytics.hpp"
#include "motrack/config.hpp"
#include "motrack/detection.hpp"
#include "motrack/errors.hpp"
#include "motrack/imaging.hpp"
#include "motrack/motion.hpp"
#include "motrack/netpbm.hpp"
#include "motrack/pipeline.hpp"
#include "motrack/pruning.hpp"
#include "motrack/simulation.hpp"
#include "motrack/text.hpp"
#include "motrack/tracking.hpp"

namespace fs = std::filesystem;
using namespace motrack;

namespace {

std::vector<FeatureStack> features_for(const std::string& manifest_path, int window,
                                       double presmooth) {
  SequenceManifest manifest = read_manifest(manifest_path);
  FrameSequence seq = load_sequence(manifest, manifest_path);
  return build_feature_stack(seq, window, presmooth);
}

void write_feature_dir(const std::vector<FeatureStack>& stacks, const std::string& dir) {
  fs::create_directories(dir);
  for (int t = 0; t < static_cast<int>(stacks.size()); ++t)
    write_ppm((fs::path(dir) / frame_filename("features_%05d.ppm", t)).string(),
              stacks[t].intensity, stacks[t].flow, stacks[t].deviation);
}

struct LevelFileOptions {
  std::string low, medium, high, builtin_file;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--low", low, "Low-sensitivity detection CSV");
    cmd->add_option("--medium", medium, "Medium-sensitivity detection CSV");
    cmd->add_option("--high", high, "High-sensitivity detection CSV");
    cmd->add_option("--builtin-file", builtin_file, "Built-in detector CSV");
  }

  std::map<Level, std::string> files() const {
    std::map<Level, std::string> out;
    if (!low.empty()) out[Level::low] = low;
    if (!medium.empty()) out[Level::medium] = medium;
    if (!high.empty()) out[Level::high] = high;
    if (!builtin_file.empty()) out[Level::builtin] = builtin_file;
    if (out.empty()) throw config_error("no detection files given");
    return out;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Motion-feature detection, tracking, and motility analytics"};
  app.require_subcommand(1);

  // features
  auto* feat = app.add_subcommand("features", "Compute motion-feature channels as PPM stacks");
  std::string feat_manifest, feat_out;
  int feat_window = 15;
  double feat_presmooth = 0.0;
  feat->add_option("--manifest", feat_manifest, "Sequence manifest")->required();
  feat->add_option("--out", feat_out, "Output directory")->required();
  feat->add_option("--window", feat_window, "Flow window (odd)");
  feat->add_option("--presmooth", feat_presmooth, "Gaussian sigma before flow");

  // detect
  auto* det = app.add_subcommand("detect", "Run the built-in blob detector");
  std::string det_manifest, det_out;
  BlobParams det_params;
  int det_window = 15;
  double det_presmooth = 0.0;
  det->add_option("--manifest", det_manifest, "Sequence manifest")->required();
  det->add_option("--out", det_out, "Output detection CSV")->required();
  det->add_option("--threshold", det_params.threshold, "Deviation threshold (0-255)");
  det->add_option("--min-area", det_params.min_area, "Minimum component area");
  det->add_option("--max-area", det_params.max_area, "Maximum component area");
  det->add_option("--box-size", det_params.box_size, "Detection box side (px)");
  det->add_option("--window", det_window, "Flow window (odd)");
  det->add_option("--presmooth", det_presmooth, "Gaussian sigma before flow");

  // merge
  auto* mrg = app.add_subcommand("merge", "Merge per-level detection files");
  LevelFileOptions mrg_files;
  std::string mrg_out;
  mrg_files.add_to(mrg);
  mrg->add_option("--out", mrg_out, "Merged detection CSV")->required();

  // prune
  auto* prn = app.add_subcommand("prune", "Area, confidence, and NMS filtering");
  std::string prn_in, prn_out, prn_level = "builtin";
  PrunerConfig prn_cfg;
  double prn_threshold = 0.0;
  prn->add_option("--in", prn_in, "Input detection CSV")->required();
  prn->add_option("--out", prn_out, "Output detection CSV")->required();
  prn->add_option("--level", prn_level, "Level the file's detections belong to");
  prn->add_option("--threshold", prn_threshold, "Confidence threshold for that level");
  prn->add_option("--max-area", prn_cfg.max_box_area, "Maximum box area (px^2)");
  prn->add_option("--nms-iou", prn_cfg.nms_iou, "NMS IoU threshold");

  // track
  auto* trk = app.add_subcommand("track", "Associate detections into tracks");
  std::string trk_in, trk_out, trk_all_out, trk_manifest, trk_overlay_dir;
  int trk_frames = 0;
  TrackerConfig trk_cfg;
  trk->add_option("--in", trk_in, "Input detection CSV")->required();
  trk->add_option("--out", trk_out, "Output track CSV (after length filter)")->required();
  trk->add_option("--all-out", trk_all_out, "Optional CSV for unfiltered tracks");
  trk->add_option("--frames", trk_frames, "Number of frames in the video");
  trk->add_option("--manifest", trk_manifest,
                  "Sequence manifest (frame count + overlay source)");
  trk->add_option("--overlay-dir", trk_overlay_dir, "Write overlay PPMs here (needs --manifest)");
  trk->add_option("--max-age", trk_cfg.max_age, "Missed frames a track survives");
  trk->add_option("--iou", trk_cfg.iou_match_threshold, "Match IoU threshold");
  trk->add_option("--min-length", trk_cfg.min_track_length, "Minimum track length (frames)");

  // eval
  auto* evl = app.add_subcommand("eval", "Track-level precision/recall against ground truth");
  std::string evl_tracks, evl_gt, evl_detections;
  double evl_radius = 15.0, evl_majority = 0.5;
  evl->add_option("--tracks", evl_tracks, "Track CSV")->required();
  evl->add_option("--gt", evl_gt, "Ground-truth CSV")->required();
  evl->add_option("--detections", evl_detections,
                  "Optional detection CSV for detection-level metrics");
  evl->add_option("--radius", evl_radius, "Match gate radius (px)");
  evl->add_option("--majority", evl_majority, "Majority fraction for track matching");

  // calibrate
  auto* cal = app.add_subcommand("calibrate", "Sweep confidence thresholds against ground truth");
  LevelFileOptions cal_files;
  std::string cal_gt, cal_out, cal_criterion = "max_f1";
  PrunerConfig cal_base;
  double cal_radius = 15.0;
  cal_files.add_to(cal);
  cal->add_option("--gt", cal_gt, "Ground-truth CSV")->required();
  cal->add_option("--out", cal_out, "Output directory for curve tables")->required();
  cal->add_option("--criterion", cal_criterion, "max_precision or max_f1");
  cal->add_option("--radius", cal_radius, "Match gate radius (px)");
  cal->add_option("--max-area", cal_base.max_box_area, "Maximum box area (px^2)");
  cal->add_option("--nms-iou", cal_base.nms_iou, "NMS IoU threshold");

  // simulate
  auto* sim = app.add_subcommand("simulate", "Generate a ground-truthed synthetic scene");
  std::string sim_config, sim_out, sim_detections;
  sim->add_option("--config", sim_config, "Simulation config JSON")->required();
  sim->add_option("--out", sim_out, "Output directory (frames + manifest + gt.csv)")->required();
  sim->add_option("--detections", sim_detections,
                  "Also write detector-noise-corrupted detections to this CSV");

  // run
  auto* run = app.add_subcommand("run", "Run the full pipeline from a config file");
  std::string run_config;
  run->add_option("--config", run_config, "Pipeline config JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;  // bad usage is a config error
  }

  try {
    if (feat->parsed()) {
      write_feature_dir(features_for(feat_manifest, feat_window, feat_presmooth), feat_out);
      std::cout << "features written to " << feat_out << "\n";
    } else if (det->parsed()) {
      DetectionSet dets =
          blob_detect(features_for(det_manifest, det_window, det_presmooth), det_params);
      write_detections(det_out, dets);
      std::cout << dets.total() << " detections written to " << det_out << "\n";
    } else if (mrg->parsed()) {
      std::vector<DetectionSet> sets;
      for (const auto& [level, file] : mrg_files.files())
        sets.push_back(read_detections(file, level));
      DetectionSet merged = merge_levels(sets);
      write_detections(mrg_out, merged);
      std::cout << merged.total() << " detections written to " << mrg_out << "\n";
    } else if (prn->parsed()) {
      Level level = parse_level(prn_level);
      DetectionSet in = read_detections(prn_in, level);
      prn_cfg.confidence_thresholds[level] = prn_threshold;
      DetectionSet out = prune(in, prn_cfg);
      write_detections(prn_out, out);
      std::cout << in.total() << " -> " << out.total() << " detections written to " << prn_out
                << "\n";
    } else if (trk->parsed()) {
      DetectionSet dets = read_detections(trk_in, Level::builtin);
      FrameSequence seq;
      int frames = trk_frames;
      if (!trk_manifest.empty()) {
        seq = load_sequence(read_manifest(trk_manifest), trk_manifest);
        frames = seq.num_frames();
      }
      if (frames <= 0)
        throw config_error("track needs --frames or --manifest to know the video length");
      if (!trk_overlay_dir.empty() && trk_manifest.empty())
        throw config_error("--overlay-dir needs --manifest for the frames");
      std::vector<Tracklet> all = track(dets, trk_cfg, frames);
      std::vector<Tracklet> kept = track_length_filter(all, trk_cfg.min_track_length);
      if (!trk_all_out.empty()) write_tracks(trk_all_out, all);
      write_tracks(trk_out, kept);
      if (!trk_overlay_dir.empty()) write_overlays(trk_overlay_dir, seq, kept);
      std::cout << all.size() << " tracks, " << kept.size() << " after length filter, written to "
                << trk_out << "\n";
    } else if (evl->parsed()) {
      std::vector<Tracklet> tracks = read_tracks(evl_tracks);
      GroundTruth gt = read_ground_truth(evl_gt);
      TrackMatchResult r = match_tracks(tracks, gt, evl_radius, evl_majority);
      std::cout << "tracks: " << tracks.size() << "  tp: " << r.tp_tracks
                << "  recovered gt ids: " << r.recovered.size() << " / " << gt.num_ids() << "\n";
      std::cout << "precision " << fmt_double(r.precision) << "\n";
      std::cout << "recall " << fmt_double(r.recall) << "\n";
      if (!evl_detections.empty()) {
        MatchCounts c =
            match_detections(read_detections(evl_detections, Level::builtin), gt, evl_radius);
        Metrics m = metrics_from_counts(c.tp, c.fp, c.fn);
        std::cout << "detections: tp " << c.tp << "  fp " << c.fp << "  fn " << c.fn
                  << "  precision " << fmt_double(m.precision) << "  recall "
                  << fmt_double(m.recall) << "  f1 " << fmt_double(m.f1) << "\n";
      }
    } else if (cal->parsed()) {
      CalibrationCriterion criterion;
      if (cal_criterion == "max_precision") {
        criterion = CalibrationCriterion::max_precision;
      } else if (cal_criterion == "max_f1") {
        criterion = CalibrationCriterion::max_f1;
      } else {
        throw config_error("criterion must be max_precision or max_f1");
      }
      std::map<Level, DetectionSet> validation;
      for (const auto& [level, file] : cal_files.files())
        validation[level] = read_detections(file, level);
      GroundTruth gt = read_ground_truth(cal_gt);
      std::vector<LevelCalibration> cals =
          calibrate_thresholds(validation, gt, cal_base, cal_radius);
      fs::create_directories(cal_out);
      for (const LevelCalibration& c : cals)
        write_calibration_curve(
            (fs::path(cal_out) / ("calibration_" + std::string(level_name(c.level)) + ".csv"))
                .string(),
            c);
      write_calibration_summary((fs::path(cal_out) / "calibration_summary.txt").string(), cals);
      for (const LevelCalibration& c : cals)
        std::cout << level_name(c.level) << ": chosen threshold "
                  << fmt_double(chosen_threshold(c, criterion)) << " (" << cal_criterion
                  << ")\n";
    } else if (sim->parsed()) {
      SimConfig cfg = load_sim_config(sim_config);
      SceneTruth truth = simulate(cfg);
      fs::create_directories(sim_out);
      if (cfg.render_frames) {
        write_sequence(truth.frames, sim_out);
      }
      write_ground_truth((fs::path(sim_out) / "gt.csv").string(), truth.paths);
      write_detections((fs::path(sim_out) / "ideal_detections.csv").string(), truth.ideal);
      if (!sim_detections.empty()) {
        DetectionSet noisy =
            corrupt_detections(truth, cfg.detector_noise, cfg.seed + 1);
        write_detections(sim_detections, noisy);
      }
      std::cout << "scene with " << cfg.agents.size() << " agents over " << cfg.frames
                << " frames written to " << sim_out << "\n";
    } else if (run->parsed()) {
      PipelineConfig cfg = load_pipeline_config(run_config);
      PipelineResult result = run_pipeline(cfg);
      std::cout << result.stages.tracks_raw.size() << " tracks, "
                << result.tracks_final.size() << " after length filter\n";
      if (result.has_report) {
        for (const StageRow& row : result.report.stages)
          std::cout << row.stage << ": precision " << fmt_double(row.precision) << "  recall "
                    << fmt_double(row.recall) << "  f1 " << fmt_double(row.f1) << "\n";
      }
      std::cout << "artifacts in " << cfg.output_dir << "\n";
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
