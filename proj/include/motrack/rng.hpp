#pragma once

#include <cmath>
#include <cstdint>

#include "motrack/errors.hpp"

namespace motrack {

// Counter-based generator: draw k of a stream is mix64(key + k * GOLDEN), the
// splitmix64 finalizer over an affine counter. No hidden state beyond (key,
// counter), so the same seed gives the same sequence on every platform, and
// independent substreams are cheap to derive. All distribution sampling goes
// through these draws; nothing here touches <random>, whose distributions are
// not bit-stable across standard libraries.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : key_(mix64(seed + GOLDEN)) {}

  // Derives an independent stream keyed by (a, b), e.g. (frame, agent).
  Rng fork(std::uint64_t a, std::uint64_t b = 0) const {
    Rng r(0);
    r.key_ = mix64(key_ ^ mix64(a + GOLDEN) ^ (mix64(b + 2 * GOLDEN) << 1));
    r.ctr_ = 0;
    return r;
  }

  std::uint64_t next_u64() { return mix64(key_ + (++ctr_) * GOLDEN); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n).
  int uniform_int(int n) {
    if (n <= 0) throw config_error("uniform_int needs a positive range");
    return static_cast<int>(uniform() * n) % n;
  }

  // Standard normal via Box-Muller; consumes exactly two draws.
  double gauss() {
    double u1 = 1.0 - uniform();  // (0, 1], keeps the log finite
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * PI * u2);
  }

  double gauss(double mean, double sigma) { return mean + sigma * gauss(); }

  // Exponential waiting time for a given rate (rate > 0).
  double exponential(double rate) {
    if (rate <= 0.0) throw config_error("exponential rate must be > 0");
    return -std::log(1.0 - uniform()) / rate;
  }

  // Knuth's product method; fine for the small means used here.
  int poisson(double mean) {
    if (mean < 0.0) throw config_error("poisson mean must be >= 0");
    if (mean == 0.0) return 0;
    double limit = std::exp(-mean);
    int k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= uniform();
    } while (p > limit);
    return k - 1;
  }

  // Marsaglia-Tsang for shape >= 1, boosted by a power of a uniform below 1.
  double gamma(double shape) {
    if (shape <= 0.0) throw config_error("gamma shape must be > 0");
    if (shape < 1.0) {
      double u = 1.0 - uniform();
      return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    double d = shape - 1.0 / 3.0;
    double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x = gauss();
      double v = 1.0 + c * x;
      if (v <= 0.0) continue;
      v = v * v * v;
      double u = 1.0 - uniform();
      if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
    }
  }

  double beta(double a, double b) {
    double x = gamma(a);
    double y = gamma(b);
    return x / (x + y);
  }

private:
  static std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
  }

  static constexpr std::uint64_t GOLDEN = 0x9e3779b97f4a7c15ULL;
  static constexpr double PI = 3.14159265358979323846;

  std::uint64_t key_;
  std::uint64_t ctr_ = 0;
};

}  // namespace motrack
