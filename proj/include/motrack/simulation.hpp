#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "motrack/analytics.hpp"
#include "motrack/detection.hpp"
#include "motrack/imaging.hpp"

namespace motrack {

// Scene simulator: point agents moving over a static cluttered background,
// recorded as ground-truth paths, rendered frames, and the detections an
// ideal detector would emit. A separate corruption pass turns those into
// realistic detector output. Everything is a pure function of (config, seed).

struct AgentConfig {
  enum class Model { run_tumble, brownian };
  Model model = Model::run_tumble;

  // Run-and-tumble: straight runs at constant speed, direction redrawn
  // uniformly at exponentially distributed tumble times. A rate of 0 never
  // tumbles (ballistic).
  double speed_um_s = 10.0;
  double tumble_rate_hz = 1.0;

  // Brownian alternative with explicit diffusivity.
  double diffusivity_um2_s = 0.0;

  // Probability per frame that the agent is invisible to the ideal detector
  // (and not rendered), approximating an object drifting out of focus.
  double dropout_prob = 0.0;

  // Start position in pixels; negative means uniform over the frame.
  double start_x = -1.0;
  double start_y = -1.0;
};

struct ClutterConfig {
  double density_per_px = 0.0;  // expected blob count per pixel
  double sigma_min = 1.5;
  double sigma_max = 3.0;
  double amplitude_min = 40.0;
  double amplitude_max = 110.0;
};

struct RenderConfig {
  double background_level = 30.0;
  double agent_amplitude = 110.0;
  double agent_sigma_px = 2.0;
  double noise_sigma = 2.0;  // per-pixel Gaussian noise
};

struct DetectorNoise {
  double miss_prob = 0.0;
  double fp_per_frame = 0.0;  // Poisson mean of false detections per frame
  double jitter_sigma_px = 0.0;
  // Beta-distributed confidences for true and false detections.
  double tp_conf_alpha = 8.0;
  double tp_conf_beta = 2.0;
  double fp_conf_alpha = 2.0;
  double fp_conf_beta = 6.0;
  // False-positive box side, uniform in this range.
  double fp_box_min = 30.0;
  double fp_box_max = 30.0;
};

struct SimConfig {
  int width = 512;
  int height = 512;
  int frames = 600;
  double fps = 60.0;
  double pixel_scale_um = 0.5;
  std::string medium = "collagen";
  std::vector<AgentConfig> agents;
  ClutterConfig clutter;
  RenderConfig render;
  DetectorNoise detector_noise;
  std::uint64_t seed = 1;
  // Path generation and ideal detections without rasterizing frames; cheap
  // mode for statistics-only runs.
  bool render_frames = true;
  double detection_box_px = 30.0;
};

struct SceneTruth {
  SimConfig config;
  GroundTruth paths;    // agent ids from 1, one sample per frame
  FrameSequence frames; // empty when render_frames is false
  DetectionSet ideal;   // what a perfect detector would report
  // Agent id behind each ideal detection, aligned with ideal.frame(t).
  std::vector<std::vector<int>> ideal_agent;
};

SceneTruth simulate(const SimConfig& cfg);

// Applies the detector error model: misses, localization jitter, confidence
// draws, and uniformly placed false positives. `provenance`, when given, gets
// the agent id per emitted detection (-1 for false positives), aligned with
// the result's per-frame lists.
DetectionSet corrupt_detections(const SceneTruth& truth, const DetectorNoise& noise,
                                std::uint64_t seed,
                                std::vector<std::vector<int>>* provenance = nullptr);

// Long-time effective diffusivity of 2-D run-and-tumble motion, v²/(2λ).
// Ballistic motion (rate 0) has no finite limit and is rejected.
double expected_diffusivity(double speed_um_s, double tumble_rate_hz);

}  // namespace motrack
