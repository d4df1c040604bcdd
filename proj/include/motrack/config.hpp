#pragma once

#include <map>
#include <string>

#include "motrack/analytics.hpp"
#include "motrack/detection.hpp"
#include "motrack/pruning.hpp"
#include "motrack/simulation.hpp"
#include "motrack/tracking.hpp"

namespace motrack {

// Everything one pipeline run needs, read from a single JSON file. Relative
// paths are resolved against the config file's directory, so a run does not
// depend on the working directory.
struct PipelineConfig {
  std::string manifest;
  std::map<Level, std::string> detection_files;  // external per-level CSVs
  bool builtin_enabled = false;
  BlobParams builtin;
  PrunerConfig pruner;
  TrackerConfig tracker;
  AnalyticsConfig analytics;
  std::string ground_truth;  // optional; empty means no evaluation
  std::string output_dir = "out";
  bool write_features = false;
  bool write_overlays = false;
  int flow_window = 15;
  double presmooth_sigma = 0.0;
};

PipelineConfig load_pipeline_config(const std::string& path);

SimConfig load_sim_config(const std::string& path);

}  // namespace motrack
