#include "motrack/pipeline.hpp"

#include <filesystem>

#include <gtest/gtest.h>
#include <json.hpp>

#include "motrack/config.hpp"
#include "motrack/errors.hpp"
#include "motrack/netpbm.hpp"
#include "test_util.hpp"

namespace fs = std::filesystem;
using namespace motrack;
using testutil::TempDir;
using testutil::code_of;
using testutil::read_file;
using testutil::write_file;

namespace {

// A fully deterministic scene: a stationary object plus three deliberate
// decoys that the pruning stages remove one each (oversized, low confidence,
// duplicate for NMS).
PipelineConfig make_scene(const TempDir& tmp) {
  FrameSequence seq;
  seq.fps = 10.0;
  seq.pixel_scale_um = 1.0;
  seq.medium = "aqueous";
  for (int f = 0; f < 12; ++f) seq.frames.emplace_back(48, 48, std::uint8_t{100});
  write_sequence(seq, tmp.path("frames"));

  DetectionSet dets(12);
  for (int f = 0; f < 12; ++f)
    dets.add({f, Box{20.0, 20.0, 10.0, 10.0}, 0.9, Level::low});
  dets.add({0, Box{40.0, 8.0, 40.0, 40.0}, 0.95, Level::low});   // area kill
  dets.add({1, Box{40.0, 40.0, 10.0, 10.0}, 0.05, Level::low});  // confidence kill
  dets.add({2, Box{21.0, 20.0, 10.0, 10.0}, 0.6, Level::low});   // NMS kill
  write_detections(tmp.path("dets_low.csv"), dets);

  std::string gt = "id,frame,x,y\n";
  for (int f = 0; f < 12; ++f) gt += "1," + std::to_string(f) + ",20,20\n";
  write_file(tmp.path("gt.csv"), gt);

  PipelineConfig cfg;
  cfg.manifest = tmp.path("frames/manifest.txt");
  cfg.detection_files[Level::low] = tmp.path("dets_low.csv");
  cfg.pruner.confidence_thresholds[Level::low] = 0.5;
  cfg.tracker.max_age = 5;
  cfg.tracker.min_track_length = 10;
  cfg.ground_truth = tmp.path("gt.csv");
  cfg.output_dir = tmp.path("out");
  return cfg;
}

}  // namespace

TEST(Pipeline, RunsEndToEndAndWritesEveryStageArtifact) {
  TempDir tmp;
  PipelineConfig cfg = make_scene(tmp);
  PipelineResult result = run_pipeline(cfg);

  EXPECT_EQ(result.num_frames, 12);
  EXPECT_EQ(result.stages.merged.total(), 15u);
  EXPECT_EQ(result.stages.after_area.total(), 14u);
  EXPECT_EQ(result.stages.after_confidence.total(), 13u);
  EXPECT_EQ(result.stages.after_nms.total(), 12u);
  ASSERT_EQ(result.tracks_final.size(), 1u);
  EXPECT_EQ(result.tracks_final[0].id, 1);
  EXPECT_EQ(result.tracks_final[0].length(), 12);

  for (const char* name :
       {"detections_merged.csv", "detections_after_area.csv", "detections_after_confidence.csv",
        "detections_after_nms.csv", "tracks_all.csv", "tracks.csv", "report.txt", "report.json",
        "pipeline_stage.txt"})
    EXPECT_TRUE(fs::exists(tmp.path(std::string("out/") + name))) << name;

  std::string marker = read_file(tmp.path("out/pipeline_stage.txt"));
  for (const char* stage : {"load", "detect", "prune", "track", "analyze", "done"})
    EXPECT_NE(marker.find(std::string("completed: ") + stage), std::string::npos) << stage;

  // The final tracks file round-trips to the in-memory result.
  std::vector<Tracklet> reread = read_tracks(tmp.path("out/tracks.csv"));
  ASSERT_EQ(reread.size(), 1u);
  EXPECT_EQ(reread[0].id, result.tracks_final[0].id);
  ASSERT_EQ(reread[0].states.size(), result.tracks_final[0].states.size());
  for (std::size_t i = 0; i < reread[0].states.size(); ++i) {
    EXPECT_EQ(reread[0].states[i].frame, result.tracks_final[0].states[i].frame);
    EXPECT_DOUBLE_EQ(reread[0].states[i].box.cx, result.tracks_final[0].states[i].box.cx);
    EXPECT_EQ(reread[0].states[i].source, result.tracks_final[0].states[i].source);
  }
}

TEST(Pipeline, ReportCountsFollowTheStages) {
  TempDir tmp;
  PipelineResult result = run_pipeline(make_scene(tmp));
  ASSERT_TRUE(result.has_report);
  ASSERT_EQ(result.report.stages.size(), 6u);

  const auto& rows = result.report.stages;
  EXPECT_EQ(rows[0].stage, "detections");
  EXPECT_EQ(rows[1].stage, "area_filter");
  EXPECT_EQ(rows[2].stage, "confidence_filter");
  EXPECT_EQ(rows[3].stage, "nms");
  EXPECT_EQ(rows[4].stage, "tracking");
  EXPECT_EQ(rows[5].stage, "track_length_filter");

  // One decoy drops per stage; the 12 true detections always match.
  EXPECT_EQ(rows[0].tp, 12);
  EXPECT_EQ(rows[0].fp, 3);
  EXPECT_EQ(rows[0].fn, 0);
  EXPECT_EQ(rows[1].fp, 2);
  EXPECT_EQ(rows[2].fp, 1);
  EXPECT_EQ(rows[3].fp, 0);
  EXPECT_DOUBLE_EQ(rows[3].precision, 1.0);
  EXPECT_DOUBLE_EQ(rows[3].recall, 1.0);

  // One track covers the one ground-truth id at both track stages.
  for (int i : {4, 5}) {
    EXPECT_EQ(rows[i].tp, 1) << i;
    EXPECT_EQ(rows[i].fp, 0) << i;
    EXPECT_EQ(rows[i].fn, 0) << i;
    EXPECT_DOUBLE_EQ(rows[i].recall, 1.0) << i;
  }

  // The stationary ground-truth path lands in the lowest motility class.
  int total = 0;
  for (const ClassFraction& f : result.report.class_fractions) total += f.total;
  EXPECT_EQ(total, 1);
  EXPECT_EQ(result.report.class_fractions[0].cls, MotilityClass::none);
  EXPECT_EQ(result.report.class_fractions[0].total, 1);
  EXPECT_EQ(result.report.class_fractions[0].detected, 1);
  EXPECT_DOUBLE_EQ(result.report.class_fractions[0].fraction, 1.0);

  // The JSON report mirrors the in-memory rows.
  nlohmann::json j = nlohmann::json::parse(read_file(tmp.path("out/report.json")));
  ASSERT_EQ(j["stages"].size(), 6u);
  EXPECT_EQ(j["stages"][0]["stage"], "detections");
  EXPECT_EQ(j["stages"][0]["tp"], 12);
  EXPECT_EQ(j["stages"][3]["fp"], 0);
  EXPECT_EQ(j["motility_fractions"].size(), 4u);
  EXPECT_EQ(j["motility_fractions"][0]["class"], "none");
  EXPECT_EQ(j["motility_fractions"][0]["detected"], 1);
}

TEST(Pipeline, ValidatesInputsBeforeCreatingOutputs) {
  TempDir tmp;
  PipelineConfig good = make_scene(tmp);

  PipelineConfig cfg = good;
  cfg.output_dir = tmp.path("never");
  cfg.manifest = "";
  EXPECT_EQ(code_of([&] { run_pipeline(cfg); }), ErrorCode::config);
  EXPECT_FALSE(fs::exists(tmp.path("never")));

  cfg = good;
  cfg.output_dir = tmp.path("never");
  cfg.manifest = tmp.path("missing_manifest.txt");
  EXPECT_EQ(code_of([&] { run_pipeline(cfg); }), ErrorCode::io);
  EXPECT_FALSE(fs::exists(tmp.path("never")));

  cfg = good;
  cfg.output_dir = tmp.path("never");
  cfg.detection_files[Level::high] = tmp.path("missing_dets.csv");
  EXPECT_EQ(code_of([&] { run_pipeline(cfg); }), ErrorCode::io);
  EXPECT_FALSE(fs::exists(tmp.path("never")));

  cfg = good;
  cfg.output_dir = tmp.path("never");
  cfg.detection_files.clear();
  EXPECT_EQ(code_of([&] { run_pipeline(cfg); }), ErrorCode::config);
  EXPECT_FALSE(fs::exists(tmp.path("never")));

  cfg = good;
  cfg.output_dir = tmp.path("never");
  cfg.ground_truth = tmp.path("missing_gt.csv");
  EXPECT_EQ(code_of([&] { run_pipeline(cfg); }), ErrorCode::io);
  EXPECT_FALSE(fs::exists(tmp.path("never")));
}

TEST(Pipeline, StageMarkerRecordsWhereARunFailed) {
  TempDir tmp;
  PipelineConfig cfg = make_scene(tmp);

  // Detections pointing past the last frame fail the detect stage.
  DetectionSet bad;
  bad.add({30, Box{10.0, 10.0, 5.0, 5.0}, 0.9, Level::low});
  write_detections(tmp.path("dets_low.csv"), bad);

  try {
    run_pipeline(cfg);
    FAIL() << "expected the detect stage to fail";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::config);
    EXPECT_NE(std::string(e.what()).find("stage 'detect'"), std::string::npos) << e.what();
  }

  std::string marker = read_file(tmp.path("out/pipeline_stage.txt"));
  EXPECT_NE(marker.find("completed: load"), std::string::npos);
  EXPECT_EQ(marker.find("completed: detect"), std::string::npos);
  EXPECT_FALSE(fs::exists(tmp.path("out/detections_merged.csv")));
}

TEST(Pipeline, BuiltinDetectorFeaturesAndOverlays) {
  TempDir tmp;

  // A bright 3x3 blob sliding right over a flat background.
  FrameSequence seq;
  seq.fps = 10.0;
  seq.pixel_scale_um = 1.0;
  seq.medium = "aqueous";
  for (int f = 0; f < 6; ++f) {
    ImageU8 img(48, 48, 20);
    int x0 = 8 + 2 * f;
    for (int y = 24; y <= 26; ++y)
      for (int x = x0; x <= x0 + 2; ++x) img.at(x, y) = 250;
    seq.frames.push_back(std::move(img));
  }
  write_sequence(seq, tmp.path("frames"));

  PipelineConfig cfg;
  cfg.manifest = tmp.path("frames/manifest.txt");
  cfg.builtin_enabled = true;
  cfg.builtin.min_area = 1;
  cfg.builtin.box_size = 8.0;
  cfg.tracker.min_track_length = 4;
  cfg.output_dir = tmp.path("out");
  cfg.write_features = true;
  cfg.write_overlays = true;

  PipelineResult result = run_pipeline(cfg);

  // One blob per frame; its pixels carry the maximal deviation, so the
  // rescaled channel saturates and the confidence is exactly 1.
  ASSERT_EQ(result.stages.merged.total(), 6u);
  for (int f = 0; f < 6; ++f) {
    const auto& dets = result.stages.merged.frame(f);
    ASSERT_EQ(dets.size(), 1u);
    EXPECT_DOUBLE_EQ(dets[0].box.cx, 9.0 + 2.0 * f);
    EXPECT_DOUBLE_EQ(dets[0].box.cy, 25.0);
    EXPECT_DOUBLE_EQ(dets[0].box.w, 8.0);
    EXPECT_DOUBLE_EQ(dets[0].confidence, 1.0);
    EXPECT_EQ(dets[0].level, Level::builtin);
  }

  ASSERT_EQ(result.tracks_final.size(), 1u);
  EXPECT_EQ(result.tracks_final[0].length(), 6);

  for (int f = 0; f < 6; ++f) {
    EXPECT_TRUE(fs::exists(tmp.path("out/features/" + frame_filename("features_%05d.ppm", f))));
    EXPECT_TRUE(fs::exists(tmp.path("out/overlays/" + frame_filename("overlay_%05d.ppm", f))));
  }
  std::string marker = read_file(tmp.path("out/pipeline_stage.txt"));
  EXPECT_NE(marker.find("completed: features"), std::string::npos);
  EXPECT_NE(marker.find("completed: overlays"), std::string::npos);

  // Overlay frames are valid color PPMs of the source size.
  ImageU8 overlay = read_image_gray(tmp.path("out/overlays/overlay_00000.ppm"));
  EXPECT_EQ(overlay.width, 48);
  EXPECT_EQ(overlay.height, 48);
}

TEST(Pipeline, RerunsProduceIdenticalArtifacts) {
  TempDir tmp;
  PipelineConfig cfg = make_scene(tmp);

  cfg.output_dir = tmp.path("out_a");
  run_pipeline(cfg);
  cfg.output_dir = tmp.path("out_b");
  run_pipeline(cfg);

  for (const char* name : {"detections_merged.csv", "detections_after_nms.csv", "tracks_all.csv",
                           "tracks.csv", "report.txt", "report.json"})
    EXPECT_EQ(read_file(tmp.path(std::string("out_a/") + name)),
              read_file(tmp.path(std::string("out_b/") + name)))
        << name;
}

TEST(Pipeline, CalibrationFilesHaveTheDocumentedShape) {
  TempDir tmp;
  LevelCalibration cal;
  cal.level = Level::medium;
  cal.curve.push_back({0.0, 10, 5, 0, 10.0 / 15.0, 1.0, 0.8});
  cal.curve.push_back({0.5, 8, 1, 2, 8.0 / 9.0, 0.8, 0.842});
  cal.max_precision_threshold = 0.5;
  cal.max_f1_threshold = 0.5;

  write_calibration_curve(tmp.path("curve.csv"), cal);
  std::string curve = read_file(tmp.path("curve.csv"));
  EXPECT_NE(curve.find("threshold,tp,fp,fn,precision,recall,f1\n"), std::string::npos);
  EXPECT_NE(curve.find("0.5,8,1,2,"), std::string::npos);

  write_calibration_summary(tmp.path("summary.txt"), {cal});
  std::string summary = read_file(tmp.path("summary.txt"));
  EXPECT_NE(summary.find("level,max_precision_threshold,max_f1_threshold"), std::string::npos);
  EXPECT_NE(summary.find("medium,0.5,0.5"), std::string::npos);
}

TEST(PipelineConfigFile, ParsesEveryKnobAndResolvesPaths) {
  TempDir tmp;
  write_file(tmp.path("run.json"), R"({
    "manifest": "frames/manifest.txt",
    "detections": {
      "low": "low.csv",
      "high": "/abs/high.csv",
      "builtin": {"threshold": 50, "min_area": 2, "max_area": 300, "box_size": 12.5}
    },
    "pruner": {
      "max_box_area": 900.0,
      "nms_iou": 0.6,
      "confidence_thresholds": {"low": 0.3, "high": 0.7}
    },
    "tracker": {
      "max_age": 10,
      "iou_match_threshold": 0.25,
      "min_track_length": 30,
      "kalman": {
        "measurement_noise": [1, 1, 20, 0.02],
        "process_noise": [1, 1, 2, 0.01, 0.01, 0.01, 0.0002],
        "init_position_variance": 5.0,
        "init_velocity_variance": 500.0
      }
    },
    "analytics": {
      "radius_px": 12.0,
      "majority": 0.6,
      "window_seconds": 2.0,
      "max_lag_seconds": 0.8,
      "motility_thresholds": [0.05, 0.2, 0.9]
    },
    "ground_truth": "gt.csv",
    "output_dir": "results",
    "write_features": true,
    "write_overlays": true,
    "flow_window": 11,
    "presmooth_sigma": 1.5
  })");

  PipelineConfig cfg = load_pipeline_config(tmp.path("run.json"));
  EXPECT_EQ(cfg.manifest, tmp.path("frames/manifest.txt"));
  EXPECT_EQ(cfg.detection_files.at(Level::low), tmp.path("low.csv"));
  EXPECT_EQ(cfg.detection_files.at(Level::high), "/abs/high.csv");
  EXPECT_TRUE(cfg.builtin_enabled);
  EXPECT_EQ(cfg.builtin.threshold, 50);
  EXPECT_EQ(cfg.builtin.min_area, 2);
  EXPECT_EQ(cfg.builtin.max_area, 300);
  EXPECT_DOUBLE_EQ(cfg.builtin.box_size, 12.5);
  EXPECT_DOUBLE_EQ(cfg.pruner.max_box_area, 900.0);
  EXPECT_DOUBLE_EQ(cfg.pruner.nms_iou, 0.6);
  EXPECT_DOUBLE_EQ(cfg.pruner.confidence_thresholds.at(Level::low), 0.3);
  EXPECT_DOUBLE_EQ(cfg.pruner.confidence_thresholds.at(Level::high), 0.7);
  EXPECT_DOUBLE_EQ(cfg.pruner.confidence_thresholds.at(Level::medium), 0.0);
  EXPECT_EQ(cfg.tracker.max_age, 10);
  EXPECT_DOUBLE_EQ(cfg.tracker.iou_match_threshold, 0.25);
  EXPECT_EQ(cfg.tracker.min_track_length, 30);
  EXPECT_DOUBLE_EQ(cfg.tracker.kalman.measurement_noise(2), 20.0);
  EXPECT_DOUBLE_EQ(cfg.tracker.kalman.process_noise(6), 0.0002);
  EXPECT_DOUBLE_EQ(cfg.tracker.kalman.init_position_variance, 5.0);
  EXPECT_DOUBLE_EQ(cfg.tracker.kalman.init_velocity_variance, 500.0);
  EXPECT_DOUBLE_EQ(cfg.analytics.radius_px, 12.0);
  EXPECT_DOUBLE_EQ(cfg.analytics.majority, 0.6);
  EXPECT_DOUBLE_EQ(cfg.analytics.window_seconds, 2.0);
  EXPECT_DOUBLE_EQ(cfg.analytics.max_lag_seconds, 0.8);
  EXPECT_DOUBLE_EQ(cfg.analytics.motility.none_max, 0.05);
  EXPECT_DOUBLE_EQ(cfg.analytics.motility.medium_max, 0.9);
  EXPECT_EQ(cfg.ground_truth, tmp.path("gt.csv"));
  EXPECT_EQ(cfg.output_dir, tmp.path("results"));
  EXPECT_TRUE(cfg.write_features);
  EXPECT_TRUE(cfg.write_overlays);
  EXPECT_EQ(cfg.flow_window, 11);
  EXPECT_DOUBLE_EQ(cfg.presmooth_sigma, 1.5);
}

TEST(PipelineConfigFile, DefaultsApplyWhenSectionsAreOmitted) {
  TempDir tmp;
  write_file(tmp.path("run.json"),
             R"({"manifest": "m.txt", "detections": {"low": "low.csv"}})");
  PipelineConfig cfg = load_pipeline_config(tmp.path("run.json"));
  EXPECT_FALSE(cfg.builtin_enabled);
  EXPECT_DOUBLE_EQ(cfg.pruner.max_box_area, 35.0 * 35.0);
  EXPECT_DOUBLE_EQ(cfg.pruner.nms_iou, 0.7);
  EXPECT_EQ(cfg.tracker.max_age, 25);
  EXPECT_DOUBLE_EQ(cfg.tracker.iou_match_threshold, 0.3);
  EXPECT_EQ(cfg.tracker.min_track_length, 60);
  EXPECT_EQ(cfg.flow_window, 15);
  EXPECT_TRUE(cfg.ground_truth.empty());
  EXPECT_EQ(cfg.output_dir, tmp.path("out"));
}

TEST(PipelineConfigFile, RejectsMalformedInputs) {
  TempDir tmp;

  EXPECT_EQ(code_of([&] { load_pipeline_config(tmp.path("absent.json")); }), ErrorCode::io);

  write_file(tmp.path("broken.json"), "{ not json");
  EXPECT_EQ(code_of([&] { load_pipeline_config(tmp.path("broken.json")); }),
            ErrorCode::format);

  write_file(tmp.path("unknown.json"),
             R"({"manifest": "m.txt", "detections": {"low": "l.csv"}, "trackr": {}})");
  EXPECT_EQ(code_of([&] { load_pipeline_config(tmp.path("unknown.json")); }),
            ErrorCode::config);

  write_file(tmp.path("nested.json"),
             R"({"manifest": "m.txt", "detections": {"low": "l.csv"},
                 "tracker": {"kalman": {"measurement_nose": [1,1,1,1]}}})");
  EXPECT_EQ(code_of([&] { load_pipeline_config(tmp.path("nested.json")); }),
            ErrorCode::config);

  write_file(tmp.path("nodets.json"), R"({"manifest": "m.txt", "detections": {}})");
  EXPECT_EQ(code_of([&] { load_pipeline_config(tmp.path("nodets.json")); }),
            ErrorCode::config);

  write_file(tmp.path("nomanifest.json"), R"({"detections": {"low": "l.csv"}})");
  EXPECT_EQ(code_of([&] { load_pipeline_config(tmp.path("nomanifest.json")); }),
            ErrorCode::config);

  write_file(tmp.path("badnoise.json"),
             R"({"manifest": "m.txt", "detections": {"low": "l.csv"},
                 "tracker": {"kalman": {"measurement_noise": [1,1,1]}}})");
  EXPECT_EQ(code_of([&] { load_pipeline_config(tmp.path("badnoise.json")); }),
            ErrorCode::config);
}

TEST(SimConfigFile, ParsesAgentsCountsAndNoiseModel) {
  TempDir tmp;
  write_file(tmp.path("sim.json"), R"({
    "width": 256, "height": 128, "frames": 90, "fps": 30.0,
    "pixel_scale_um": 0.5, "medium": "collagen", "seed": 77,
    "render_frames": false, "detection_box_px": 24.0,
    "agents": [
      {"model": "brownian", "diffusivity_um2_s": 1.5, "count": 3},
      {"model": "run_tumble", "speed_um_s": 12.0, "tumble_rate_hz": 2.0,
       "dropout_prob": 0.1, "start": [10.0, 20.0]}
    ],
    "clutter": {"density_per_px": 0.002, "sigma_range": [1.0, 2.0],
                "amplitude_range": [30.0, 60.0]},
    "rendering": {"background_level": 40.0, "agent_amplitude": 120.0,
                  "agent_sigma_px": 1.5, "noise_sigma": 3.0},
    "detector_noise": {"miss_prob": 0.2, "fp_per_frame": 4.0, "jitter_sigma_px": 1.0,
                       "tp_confidence_beta": [5.0, 3.0], "fp_confidence_beta": [1.5, 4.0],
                       "fp_box_range": [10.0, 20.0]}
  })");

  SimConfig cfg = load_sim_config(tmp.path("sim.json"));
  EXPECT_EQ(cfg.width, 256);
  EXPECT_EQ(cfg.height, 128);
  EXPECT_EQ(cfg.frames, 90);
  EXPECT_DOUBLE_EQ(cfg.fps, 30.0);
  EXPECT_DOUBLE_EQ(cfg.pixel_scale_um, 0.5);
  EXPECT_EQ(cfg.medium, "collagen");
  EXPECT_EQ(cfg.seed, 77u);
  EXPECT_FALSE(cfg.render_frames);
  EXPECT_DOUBLE_EQ(cfg.detection_box_px, 24.0);

  ASSERT_EQ(cfg.agents.size(), 4u);  // count 3 expands, plus one more
  EXPECT_EQ(cfg.agents[0].model, AgentConfig::Model::brownian);
  EXPECT_DOUBLE_EQ(cfg.agents[2].diffusivity_um2_s, 1.5);
  EXPECT_EQ(cfg.agents[3].model, AgentConfig::Model::run_tumble);
  EXPECT_DOUBLE_EQ(cfg.agents[3].speed_um_s, 12.0);
  EXPECT_DOUBLE_EQ(cfg.agents[3].dropout_prob, 0.1);
  EXPECT_DOUBLE_EQ(cfg.agents[3].start_x, 10.0);
  EXPECT_DOUBLE_EQ(cfg.agents[3].start_y, 20.0);

  EXPECT_DOUBLE_EQ(cfg.clutter.density_per_px, 0.002);
  EXPECT_DOUBLE_EQ(cfg.clutter.sigma_min, 1.0);
  EXPECT_DOUBLE_EQ(cfg.clutter.amplitude_max, 60.0);
  EXPECT_DOUBLE_EQ(cfg.render.background_level, 40.0);
  EXPECT_DOUBLE_EQ(cfg.render.noise_sigma, 3.0);
  EXPECT_DOUBLE_EQ(cfg.detector_noise.miss_prob, 0.2);
  EXPECT_DOUBLE_EQ(cfg.detector_noise.tp_conf_alpha, 5.0);
  EXPECT_DOUBLE_EQ(cfg.detector_noise.tp_conf_beta, 3.0);
  EXPECT_DOUBLE_EQ(cfg.detector_noise.fp_conf_alpha, 1.5);
  EXPECT_DOUBLE_EQ(cfg.detector_noise.fp_box_min, 10.0);
  EXPECT_DOUBLE_EQ(cfg.detector_noise.fp_box_max, 20.0);
}

TEST(SimConfigFile, RejectsBadAgentEntries) {
  TempDir tmp;

  write_file(tmp.path("model.json"), R"({"agents": [{"model": "walk"}]})");
  EXPECT_EQ(code_of([&] { load_sim_config(tmp.path("model.json")); }), ErrorCode::config);

  write_file(tmp.path("count.json"), R"({"agents": [{"count": 0}]})");
  EXPECT_EQ(code_of([&] { load_sim_config(tmp.path("count.json")); }), ErrorCode::config);

  write_file(tmp.path("start.json"), R"({"agents": [{"start": [1.0]}]})");
  EXPECT_EQ(code_of([&] { load_sim_config(tmp.path("start.json")); }), ErrorCode::config);

  write_file(tmp.path("key.json"), R"({"agents": [{"speeed": 3.0}]})");
  EXPECT_EQ(code_of([&] { load_sim_config(tmp.path("key.json")); }), ErrorCode::config);

  write_file(tmp.path("range.json"), R"({"clutter": {"sigma_range": [1.0, 2.0, 3.0]}})");
  EXPECT_EQ(code_of([&] { load_sim_config(tmp.path("range.json")); }), ErrorCode::config);
}
