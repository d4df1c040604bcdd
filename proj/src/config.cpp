#include "motrack/config.hpp"

#include <filesystem>
#include <fstream>
#include <set>

#include <json.hpp>

#include "motrack/errors.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace motrack {
namespace {

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw format_error(path + ": " + e.what());
  }
  if (!j.is_object()) throw format_error(path + ": config root must be a JSON object");
  return j;
}

// Unknown keys are almost always typos; reject them.
void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& context) {
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items())
    if (!ok.count(key)) throw config_error(context + ": unknown key '" + key + "'");
}

double get_number(const json& obj, const char* key, double fallback, const std::string& context) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number())
    throw config_error(context + ": '" + std::string(key) + "' must be a number");
  return obj[key].get<double>();
}

int get_int(const json& obj, const char* key, int fallback, const std::string& context) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_integer())
    throw config_error(context + ": '" + std::string(key) + "' must be an integer");
  return obj[key].get<int>();
}

bool get_bool(const json& obj, const char* key, bool fallback, const std::string& context) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_boolean())
    throw config_error(context + ": '" + std::string(key) + "' must be a boolean");
  return obj[key].get<bool>();
}

std::string get_string(const json& obj, const char* key, const std::string& fallback,
                       const std::string& context) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_string())
    throw config_error(context + ": '" + std::string(key) + "' must be a string");
  return obj[key].get<std::string>();
}

std::vector<double> get_array(const json& obj, const char* key, std::size_t size,
                              const std::string& context) {
  const json& a = obj[key];
  if (!a.is_array() || a.size() != size)
    throw config_error(context + ": '" + std::string(key) + "' must be an array of " +
                       std::to_string(size) + " numbers");
  std::vector<double> out;
  for (const json& v : a) {
    if (!v.is_number())
      throw config_error(context + ": '" + std::string(key) + "' must contain numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

std::string resolve(const std::string& path, const fs::path& base) {
  if (path.empty()) return path;
  fs::path p(path);
  return p.is_absolute() ? p.string() : (base / p).string();
}

}  // namespace

PipelineConfig load_pipeline_config(const std::string& path) {
  json j = load_json(path);
  const fs::path base = fs::path(path).parent_path();
  const std::string ctx = path;

  check_keys(j,
             {"manifest", "detections", "pruner", "tracker", "analytics", "ground_truth",
              "output_dir", "write_features", "write_overlays", "flow_window",
              "presmooth_sigma"},
             ctx);

  PipelineConfig cfg;
  cfg.manifest = get_string(j, "manifest", "", ctx);
  if (cfg.manifest.empty()) throw config_error(ctx + ": 'manifest' is required");
  cfg.manifest = resolve(cfg.manifest, base);

  if (!j.contains("detections") || !j["detections"].is_object())
    throw config_error(ctx + ": 'detections' object is required");
  const json& dets = j["detections"];
  check_keys(dets, {"low", "medium", "high", "builtin"}, ctx + ".detections");
  for (const char* name : {"low", "medium", "high"}) {
    if (!dets.contains(name)) continue;
    std::string file = get_string(dets, name, "", ctx + ".detections");
    if (file.empty())
      throw config_error(ctx + ".detections: '" + std::string(name) + "' must be a file path");
    cfg.detection_files[parse_level(name)] = resolve(file, base);
  }
  if (dets.contains("builtin")) {
    const json& b = dets["builtin"];
    if (!b.is_object()) throw config_error(ctx + ".detections: 'builtin' must be an object");
    check_keys(b, {"threshold", "min_area", "max_area", "box_size"}, ctx + ".detections.builtin");
    cfg.builtin_enabled = true;
    cfg.builtin.threshold = get_int(b, "threshold", cfg.builtin.threshold, ctx);
    cfg.builtin.min_area = get_int(b, "min_area", cfg.builtin.min_area, ctx);
    cfg.builtin.max_area = get_int(b, "max_area", cfg.builtin.max_area, ctx);
    cfg.builtin.box_size = get_number(b, "box_size", cfg.builtin.box_size, ctx);
  }
  if (cfg.detection_files.empty() && !cfg.builtin_enabled)
    throw config_error(ctx + ": 'detections' must name at least one source "
                             "(low/medium/high file or builtin)");

  if (j.contains("pruner")) {
    const json& p = j["pruner"];
    if (!p.is_object()) throw config_error(ctx + ": 'pruner' must be an object");
    check_keys(p, {"max_box_area", "nms_iou", "confidence_thresholds"}, ctx + ".pruner");
    cfg.pruner.max_box_area = get_number(p, "max_box_area", cfg.pruner.max_box_area, ctx);
    cfg.pruner.nms_iou = get_number(p, "nms_iou", cfg.pruner.nms_iou, ctx);
    if (p.contains("confidence_thresholds")) {
      const json& t = p["confidence_thresholds"];
      if (!t.is_object())
        throw config_error(ctx + ".pruner: 'confidence_thresholds' must be an object");
      check_keys(t, {"low", "medium", "high", "builtin"},
                 ctx + ".pruner.confidence_thresholds");
      for (const auto& [key, value] : t.items()) {
        if (!value.is_number())
          throw config_error(ctx + ".pruner.confidence_thresholds: '" + key +
                             "' must be a number");
        cfg.pruner.confidence_thresholds[parse_level(key)] = value.get<double>();
      }
    }
  }

  if (j.contains("tracker")) {
    const json& t = j["tracker"];
    if (!t.is_object()) throw config_error(ctx + ": 'tracker' must be an object");
    check_keys(t, {"max_age", "iou_match_threshold", "min_track_length", "kalman"},
               ctx + ".tracker");
    cfg.tracker.max_age = get_int(t, "max_age", cfg.tracker.max_age, ctx);
    cfg.tracker.iou_match_threshold =
        get_number(t, "iou_match_threshold", cfg.tracker.iou_match_threshold, ctx);
    cfg.tracker.min_track_length =
        get_int(t, "min_track_length", cfg.tracker.min_track_length, ctx);
    if (t.contains("kalman")) {
      const json& k = t["kalman"];
      if (!k.is_object()) throw config_error(ctx + ".tracker: 'kalman' must be an object");
      check_keys(k,
                 {"measurement_noise", "process_noise", "init_position_variance",
                  "init_velocity_variance"},
                 ctx + ".tracker.kalman");
      if (k.contains("measurement_noise")) {
        auto v = get_array(k, "measurement_noise", 4, ctx + ".tracker.kalman");
        for (int i = 0; i < 4; ++i) cfg.tracker.kalman.measurement_noise(i) = v[i];
      }
      if (k.contains("process_noise")) {
        auto v = get_array(k, "process_noise", 7, ctx + ".tracker.kalman");
        for (int i = 0; i < 7; ++i) cfg.tracker.kalman.process_noise(i) = v[i];
      }
      cfg.tracker.kalman.init_position_variance =
          get_number(k, "init_position_variance", cfg.tracker.kalman.init_position_variance,
                     ctx);
      cfg.tracker.kalman.init_velocity_variance =
          get_number(k, "init_velocity_variance", cfg.tracker.kalman.init_velocity_variance,
                     ctx);
    }
  }

  if (j.contains("analytics")) {
    const json& a = j["analytics"];
    if (!a.is_object()) throw config_error(ctx + ": 'analytics' must be an object");
    check_keys(a,
               {"radius_px", "majority", "window_seconds", "max_lag_seconds",
                "motility_thresholds"},
               ctx + ".analytics");
    cfg.analytics.radius_px = get_number(a, "radius_px", cfg.analytics.radius_px, ctx);
    cfg.analytics.majority = get_number(a, "majority", cfg.analytics.majority, ctx);
    cfg.analytics.window_seconds =
        get_number(a, "window_seconds", cfg.analytics.window_seconds, ctx);
    cfg.analytics.max_lag_seconds =
        get_number(a, "max_lag_seconds", cfg.analytics.max_lag_seconds, ctx);
    if (a.contains("motility_thresholds")) {
      auto v = get_array(a, "motility_thresholds", 3, ctx + ".analytics");
      cfg.analytics.motility.none_max = v[0];
      cfg.analytics.motility.low_max = v[1];
      cfg.analytics.motility.medium_max = v[2];
    }
  }

  cfg.ground_truth = resolve(get_string(j, "ground_truth", "", ctx), base);
  cfg.output_dir = resolve(get_string(j, "output_dir", cfg.output_dir, ctx), base);
  cfg.write_features = get_bool(j, "write_features", cfg.write_features, ctx);
  cfg.write_overlays = get_bool(j, "write_overlays", cfg.write_overlays, ctx);
  cfg.flow_window = get_int(j, "flow_window", cfg.flow_window, ctx);
  cfg.presmooth_sigma = get_number(j, "presmooth_sigma", cfg.presmooth_sigma, ctx);
  return cfg;
}

SimConfig load_sim_config(const std::string& path) {
  json j = load_json(path);
  const std::string ctx = path;

  check_keys(j,
             {"width", "height", "frames", "fps", "pixel_scale_um", "medium", "seed",
              "render_frames", "detection_box_px", "agents", "clutter", "rendering",
              "detector_noise"},
             ctx);

  SimConfig cfg;
  cfg.width = get_int(j, "width", cfg.width, ctx);
  cfg.height = get_int(j, "height", cfg.height, ctx);
  cfg.frames = get_int(j, "frames", cfg.frames, ctx);
  cfg.fps = get_number(j, "fps", cfg.fps, ctx);
  cfg.pixel_scale_um = get_number(j, "pixel_scale_um", cfg.pixel_scale_um, ctx);
  cfg.medium = get_string(j, "medium", cfg.medium, ctx);
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer())
      throw config_error(ctx + ": 'seed' must be an integer");
    cfg.seed = j["seed"].get<std::uint64_t>();
  }
  cfg.render_frames = get_bool(j, "render_frames", cfg.render_frames, ctx);
  cfg.detection_box_px = get_number(j, "detection_box_px", cfg.detection_box_px, ctx);

  if (j.contains("agents")) {
    if (!j["agents"].is_array()) throw config_error(ctx + ": 'agents' must be an array");
    for (const json& a : j["agents"]) {
      if (!a.is_object()) throw config_error(ctx + ".agents: entries must be objects");
      check_keys(a,
                 {"model", "speed_um_s", "tumble_rate_hz", "diffusivity_um2_s", "dropout_prob",
                  "start", "count"},
                 ctx + ".agents");
      AgentConfig ac;
      std::string model = get_string(a, "model", "run_tumble", ctx);
      if (model == "run_tumble") {
        ac.model = AgentConfig::Model::run_tumble;
      } else if (model == "brownian") {
        ac.model = AgentConfig::Model::brownian;
      } else {
        throw config_error(ctx + ".agents: model must be 'run_tumble' or 'brownian'");
      }
      ac.speed_um_s = get_number(a, "speed_um_s", ac.speed_um_s, ctx);
      ac.tumble_rate_hz = get_number(a, "tumble_rate_hz", ac.tumble_rate_hz, ctx);
      ac.diffusivity_um2_s = get_number(a, "diffusivity_um2_s", ac.diffusivity_um2_s, ctx);
      ac.dropout_prob = get_number(a, "dropout_prob", ac.dropout_prob, ctx);
      if (a.contains("start")) {
        auto v = get_array(a, "start", 2, ctx + ".agents");
        ac.start_x = v[0];
        ac.start_y = v[1];
      }
      int count = get_int(a, "count", 1, ctx);
      if (count < 1) throw config_error(ctx + ".agents: 'count' must be >= 1");
      for (int i = 0; i < count; ++i) cfg.agents.push_back(ac);
    }
  }

  if (j.contains("clutter")) {
    const json& c = j["clutter"];
    if (!c.is_object()) throw config_error(ctx + ": 'clutter' must be an object");
    check_keys(c, {"density_per_px", "sigma_range", "amplitude_range"}, ctx + ".clutter");
    cfg.clutter.density_per_px = get_number(c, "density_per_px", cfg.clutter.density_per_px, ctx);
    if (c.contains("sigma_range")) {
      auto v = get_array(c, "sigma_range", 2, ctx + ".clutter");
      cfg.clutter.sigma_min = v[0];
      cfg.clutter.sigma_max = v[1];
    }
    if (c.contains("amplitude_range")) {
      auto v = get_array(c, "amplitude_range", 2, ctx + ".clutter");
      cfg.clutter.amplitude_min = v[0];
      cfg.clutter.amplitude_max = v[1];
    }
  }

  if (j.contains("rendering")) {
    const json& r = j["rendering"];
    if (!r.is_object()) throw config_error(ctx + ": 'rendering' must be an object");
    check_keys(r, {"background_level", "agent_amplitude", "agent_sigma_px", "noise_sigma"},
               ctx + ".rendering");
    cfg.render.background_level =
        get_number(r, "background_level", cfg.render.background_level, ctx);
    cfg.render.agent_amplitude =
        get_number(r, "agent_amplitude", cfg.render.agent_amplitude, ctx);
    cfg.render.agent_sigma_px = get_number(r, "agent_sigma_px", cfg.render.agent_sigma_px, ctx);
    cfg.render.noise_sigma = get_number(r, "noise_sigma", cfg.render.noise_sigma, ctx);
  }

  if (j.contains("detector_noise")) {
    const json& n = j["detector_noise"];
    if (!n.is_object()) throw config_error(ctx + ": 'detector_noise' must be an object");
    check_keys(n,
               {"miss_prob", "fp_per_frame", "jitter_sigma_px", "tp_confidence_beta",
                "fp_confidence_beta", "fp_box_range"},
               ctx + ".detector_noise");
    cfg.detector_noise.miss_prob = get_number(n, "miss_prob", cfg.detector_noise.miss_prob, ctx);
    cfg.detector_noise.fp_per_frame =
        get_number(n, "fp_per_frame", cfg.detector_noise.fp_per_frame, ctx);
    cfg.detector_noise.jitter_sigma_px =
        get_number(n, "jitter_sigma_px", cfg.detector_noise.jitter_sigma_px, ctx);
    if (n.contains("tp_confidence_beta")) {
      auto v = get_array(n, "tp_confidence_beta", 2, ctx + ".detector_noise");
      cfg.detector_noise.tp_conf_alpha = v[0];
      cfg.detector_noise.tp_conf_beta = v[1];
    }
    if (n.contains("fp_confidence_beta")) {
      auto v = get_array(n, "fp_confidence_beta", 2, ctx + ".detector_noise");
      cfg.detector_noise.fp_conf_alpha = v[0];
      cfg.detector_noise.fp_conf_beta = v[1];
    }
    if (n.contains("fp_box_range")) {
      auto v = get_array(n, "fp_box_range", 2, ctx + ".detector_noise");
      cfg.detector_noise.fp_box_min = v[0];
      cfg.detector_noise.fp_box_max = v[1];
    }
  }
  return cfg;
}

}  // namespace motrack
