#include "motrack/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "motrack/errors.hpp"
#include "motrack/rng.hpp"

namespace motrack {
namespace {

constexpr double kPi = 3.14159265358979323846;

// Substream selectors for the one root generator.
enum Stream : std::uint64_t { kClutter = 1, kAgent = 2, kDropout = 3, kNoise = 4, kCorrupt = 5 };

void validate(const SimConfig& cfg) {
  if (cfg.width < 1 || cfg.height < 1) throw config_error("simulation frame must be non-empty");
  if (cfg.frames < 1) throw config_error("simulation needs at least one frame");
  if (!(cfg.fps > 0.0)) throw config_error("simulation fps must be > 0");
  if (!(cfg.pixel_scale_um > 0.0)) throw config_error("simulation pixel scale must be > 0");
  if (!(cfg.detection_box_px > 0.0)) throw config_error("detection box size must be > 0");
  for (const AgentConfig& a : cfg.agents) {
    if (a.speed_um_s < 0.0) throw config_error("agent speed must be >= 0");
    if (a.tumble_rate_hz < 0.0) throw config_error("agent tumble rate must be >= 0");
    if (a.diffusivity_um2_s < 0.0) throw config_error("agent diffusivity must be >= 0");
    if (!(a.dropout_prob >= 0.0 && a.dropout_prob <= 1.0))
      throw config_error("agent dropout probability must be in [0, 1]");
  }
  const ClutterConfig& c = cfg.clutter;
  if (c.density_per_px < 0.0 || c.sigma_min <= 0.0 || c.sigma_max < c.sigma_min ||
      c.amplitude_min < 0.0 || c.amplitude_max < c.amplitude_min)
    throw config_error("clutter parameters out of range");
  if (cfg.render.noise_sigma < 0.0 || cfg.render.agent_sigma_px <= 0.0)
    throw config_error("render parameters out of range");
  const DetectorNoise& n = cfg.detector_noise;
  if (!(n.miss_prob >= 0.0 && n.miss_prob <= 1.0) || n.fp_per_frame < 0.0 ||
      n.jitter_sigma_px < 0.0 || n.tp_conf_alpha <= 0.0 || n.tp_conf_beta <= 0.0 ||
      n.fp_conf_alpha <= 0.0 || n.fp_conf_beta <= 0.0 || n.fp_box_min <= 0.0 ||
      n.fp_box_max < n.fp_box_min)
    throw config_error("detector noise parameters out of range");
}

struct MovingPoint {
  double x = 0.0, y = 0.0;
  double vx = 0.0, vy = 0.0;
};

// Straight-line motion for dt with reflective walls at the frame edges. Each
// wall hit advances to the wall, flips the offending velocity component, and
// continues with the remaining time, so speed is preserved exactly.
void advance_reflecting(MovingPoint& p, double dt, double w, double h) {
  double rem = dt;
  for (int guard = 0; guard < 64 && rem > 0.0; ++guard) {
    double nx = p.x + p.vx * rem;
    double ny = p.y + p.vy * rem;
    double t_hit = rem;
    if (p.vx > 0.0 && nx > w) t_hit = std::min(t_hit, (w - p.x) / p.vx);
    if (p.vx < 0.0 && nx < 0.0) t_hit = std::min(t_hit, -p.x / p.vx);
    if (p.vy > 0.0 && ny > h) t_hit = std::min(t_hit, (h - p.y) / p.vy);
    if (p.vy < 0.0 && ny < 0.0) t_hit = std::min(t_hit, -p.y / p.vy);
    t_hit = std::max(t_hit, 0.0);

    p.x += p.vx * t_hit;
    p.y += p.vy * t_hit;
    rem -= t_hit;
    if (rem <= 0.0) break;

    if (p.x <= 0.0 && p.vx < 0.0) p.vx = -p.vx;
    if (p.x >= w && p.vx > 0.0) p.vx = -p.vx;
    if (p.y <= 0.0 && p.vy < 0.0) p.vy = -p.vy;
    if (p.y >= h && p.vy > 0.0) p.vy = -p.vy;
  }
  p.x = std::clamp(p.x, 0.0, w);
  p.y = std::clamp(p.y, 0.0, h);
}

// Mirror-fold a coordinate back into [0, limit].
double reflect_into(double x, double limit) {
  if (limit <= 0.0) return 0.0;
  double period = 2.0 * limit;
  x = std::fmod(x, period);
  if (x < 0.0) x += period;
  return x > limit ? period - x : x;
}

std::vector<TrackSample> simulate_agent(const AgentConfig& a, const SimConfig& cfg, Rng rng) {
  const double w = cfg.width, h = cfg.height;
  const double dt = 1.0 / cfg.fps;

  MovingPoint p;
  p.x = a.start_x < 0.0 ? rng.uniform(0.0, w) : a.start_x;
  p.y = a.start_y < 0.0 ? rng.uniform(0.0, h) : a.start_y;
  if (p.x < 0.0 || p.x > w || p.y < 0.0 || p.y > h)
    throw config_error("agent start position lies outside the frame");

  std::vector<TrackSample> path;
  path.reserve(cfg.frames);
  path.push_back({0, p.x, p.y});

  if (a.model == AgentConfig::Model::brownian) {
    double step_px = std::sqrt(2.0 * (a.diffusivity_um2_s / (cfg.pixel_scale_um *
                                                             cfg.pixel_scale_um)) *
                               dt);
    for (int f = 1; f < cfg.frames; ++f) {
      p.x = reflect_into(p.x + step_px * rng.gauss(), w);
      p.y = reflect_into(p.y + step_px * rng.gauss(), h);
      path.push_back({f, p.x, p.y});
    }
    return path;
  }

  // Run-and-tumble, integrated exactly: runs are straight lines, tumble times
  // are an exponential clock, and frame samples fall wherever they fall
  // within a run.
  const double speed_px = a.speed_um_s / cfg.pixel_scale_um;
  double angle = rng.uniform(0.0, 2.0 * kPi);
  p.vx = speed_px * std::cos(angle);
  p.vy = speed_px * std::sin(angle);
  const bool tumbles = a.tumble_rate_hz > 0.0;
  double next_tumble = tumbles ? rng.exponential(a.tumble_rate_hz)
                               : std::numeric_limits<double>::infinity();

  double t = 0.0;
  for (int f = 1; f < cfg.frames; ++f) {
    double t_target = f * dt;
    while (tumbles && next_tumble <= t_target) {
      advance_reflecting(p, next_tumble - t, w, h);
      t = next_tumble;
      angle = rng.uniform(0.0, 2.0 * kPi);
      p.vx = speed_px * std::cos(angle);
      p.vy = speed_px * std::sin(angle);
      next_tumble += rng.exponential(a.tumble_rate_hz);
    }
    advance_reflecting(p, t_target - t, w, h);
    t = t_target;
    path.push_back({f, p.x, p.y});
  }
  return path;
}

void splat_gaussian(GridF& img, double cx, double cy, double amplitude, double sigma) {
  int r = static_cast<int>(std::ceil(4.0 * sigma));
  int x0 = std::max(0, static_cast<int>(std::floor(cx)) - r);
  int x1 = std::min(img.width - 1, static_cast<int>(std::ceil(cx)) + r);
  int y0 = std::max(0, static_cast<int>(std::floor(cy)) - r);
  int y1 = std::min(img.height - 1, static_cast<int>(std::ceil(cy)) + r);
  double inv = 1.0 / (2.0 * sigma * sigma);
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      double d2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
      img.at(x, y) += amplitude * std::exp(-d2 * inv);
    }
  }
}

}  // namespace

SceneTruth simulate(const SimConfig& cfg) {
  validate(cfg);
  Rng root(cfg.seed);

  SceneTruth truth;
  truth.config = cfg;

  const int n_agents = static_cast<int>(cfg.agents.size());
  std::vector<std::vector<TrackSample>> paths(n_agents);
  for (int a = 0; a < n_agents; ++a) {
    paths[a] = simulate_agent(cfg.agents[a], cfg, root.fork(kAgent, a));
    truth.paths.paths[a + 1] = paths[a];
  }

  // Per-frame visibility after dropout.
  std::vector<std::vector<std::uint8_t>> visible(n_agents,
                                                 std::vector<std::uint8_t>(cfg.frames, 1));
  for (int a = 0; a < n_agents; ++a) {
    if (cfg.agents[a].dropout_prob <= 0.0) continue;
    Rng r = root.fork(kDropout, a);
    for (int f = 0; f < cfg.frames; ++f)
      if (r.uniform() < cfg.agents[a].dropout_prob) visible[a][f] = 0;
  }

  truth.ideal.resize_frames(cfg.frames);
  truth.ideal_agent.resize(cfg.frames);
  for (int f = 0; f < cfg.frames; ++f) {
    for (int a = 0; a < n_agents; ++a) {
      if (!visible[a][f]) continue;
      Detection d;
      d.frame = f;
      d.box = Box{paths[a][f].x, paths[a][f].y, cfg.detection_box_px, cfg.detection_box_px};
      d.confidence = 1.0;
      d.level = Level::builtin;
      truth.ideal.add(d);
      truth.ideal_agent[f].push_back(a + 1);
    }
  }

  truth.frames.fps = cfg.fps;
  truth.frames.pixel_scale_um = cfg.pixel_scale_um;
  truth.frames.medium = cfg.medium;
  if (!cfg.render_frames) return truth;

  // Static clutter layer, rendered once.
  GridF background(cfg.width, cfg.height, cfg.render.background_level);
  {
    Rng r = root.fork(kClutter, 0);
    long blobs = std::llround(cfg.clutter.density_per_px *
                              static_cast<double>(cfg.width) * cfg.height);
    for (long i = 0; i < blobs; ++i) {
      double x = r.uniform(0.0, cfg.width);
      double y = r.uniform(0.0, cfg.height);
      double sigma = r.uniform(cfg.clutter.sigma_min, cfg.clutter.sigma_max);
      double amp = r.uniform(cfg.clutter.amplitude_min, cfg.clutter.amplitude_max);
      splat_gaussian(background, x, y, amp, sigma);
    }
  }

  truth.frames.frames.reserve(cfg.frames);
  for (int f = 0; f < cfg.frames; ++f) {
    GridF img = background;
    for (int a = 0; a < n_agents; ++a)
      if (visible[a][f])
        splat_gaussian(img, paths[a][f].x, paths[a][f].y, cfg.render.agent_amplitude,
                       cfg.render.agent_sigma_px);

    ImageU8 out(cfg.width, cfg.height);
    if (cfg.render.noise_sigma > 0.0) {
      Rng r = root.fork(kNoise, f);
      for (std::size_t i = 0; i < img.size(); ++i)
        out.data[i] = clamp_u8(img.data[i] + r.gauss() * cfg.render.noise_sigma);
    } else {
      for (std::size_t i = 0; i < img.size(); ++i) out.data[i] = clamp_u8(img.data[i]);
    }
    truth.frames.frames.push_back(std::move(out));
  }
  return truth;
}

DetectionSet corrupt_detections(const SceneTruth& truth, const DetectorNoise& noise,
                                std::uint64_t seed,
                                std::vector<std::vector<int>>* provenance) {
  if (!(noise.miss_prob >= 0.0 && noise.miss_prob <= 1.0) || noise.fp_per_frame < 0.0 ||
      noise.jitter_sigma_px < 0.0 || noise.tp_conf_alpha <= 0.0 || noise.tp_conf_beta <= 0.0 ||
      noise.fp_conf_alpha <= 0.0 || noise.fp_conf_beta <= 0.0 || noise.fp_box_min <= 0.0 ||
      noise.fp_box_max < noise.fp_box_min)
    throw config_error("detector noise parameters out of range");

  const SimConfig& cfg = truth.config;
  Rng root(seed);
  DetectionSet out(cfg.frames);
  if (provenance) provenance->assign(cfg.frames, {});

  for (int f = 0; f < cfg.frames; ++f) {
    Rng r = root.fork(kCorrupt, f);
    const auto& ideal = truth.ideal.frame(f);
    for (std::size_t i = 0; i < ideal.size(); ++i) {
      if (noise.miss_prob > 0.0 && r.uniform() < noise.miss_prob) continue;
      Detection d = ideal[i];
      if (noise.jitter_sigma_px > 0.0) {
        d.box.cx += r.gauss() * noise.jitter_sigma_px;
        d.box.cy += r.gauss() * noise.jitter_sigma_px;
      }
      d.confidence = r.beta(noise.tp_conf_alpha, noise.tp_conf_beta);
      out.add(d);
      if (provenance) (*provenance)[f].push_back(truth.ideal_agent[f][i]);
    }

    int n_fp = noise.fp_per_frame > 0.0 ? r.poisson(noise.fp_per_frame) : 0;
    for (int k = 0; k < n_fp; ++k) {
      Detection d;
      d.frame = f;
      double side = noise.fp_box_max > noise.fp_box_min
                        ? r.uniform(noise.fp_box_min, noise.fp_box_max)
                        : noise.fp_box_min;
      d.box = Box{r.uniform(0.0, cfg.width), r.uniform(0.0, cfg.height), side, side};
      d.confidence = r.beta(noise.fp_conf_alpha, noise.fp_conf_beta);
      d.level = Level::builtin;
      out.add(d);
      if (provenance) (*provenance)[f].push_back(-1);
    }
  }
  return out;
}

double expected_diffusivity(double speed_um_s, double tumble_rate_hz) {
  if (speed_um_s < 0.0) throw config_error("speed must be >= 0");
  if (!(tumble_rate_hz > 0.0))
    throw config_error("effective diffusivity needs a positive tumble rate");
  return speed_um_s * speed_um_s / (2.0 * tumble_rate_hz);
}

}  // namespace motrack
