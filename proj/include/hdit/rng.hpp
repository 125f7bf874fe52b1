#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

// Explicit-state random variate generation.  All samplers take an Rng by
// reference and are deterministic given its state; nothing is shared, so
// each thread owns its own Rng.  The raw bit stream comes from mt19937_64
// and every distribution is built from uniforms by hand so that results
// are identical across platforms and standard library versions.

namespace hdit {

struct Rng {
  std::mt19937_64 engine;
  explicit Rng(std::uint64_t seed) : engine(seed) {}
};

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Per-replicate stream: base seed and replicate index mixed through
// splitmix64 so replicates are independent of processing order.
inline Rng derive_rng(std::uint64_t seed, std::uint64_t index) {
  return Rng(splitmix64(splitmix64(seed) ^ splitmix64(index + 1)));
}

// Uniform on (0, 1].
inline double uniform01(Rng& rng) {
  return (static_cast<double>(rng.engine() >> 11) + 1.0) * 0x1.0p-53;
}

// Box-Muller.
inline double sample_normal(Rng& rng) {
  const double u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

// Marsaglia-Tsang squeeze/rejection for shape >= 1; the usual
// u^{1/shape} boost for shape < 1.
inline double sample_gamma(double shape, double scale, Rng& rng) {
  if (!(shape > 0.0) || !(scale > 0.0)) {
    throw std::domain_error("sample_gamma: shape and scale must be positive");
  }
  double boost = 1.0;
  if (shape < 1.0) {
    boost = std::pow(uniform01(rng), 1.0 / shape);
    shape += 1.0;
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double v;
    do {
      x = sample_normal(rng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform01(rng);
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) {
      return boost * scale * d * v;
    }
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) {
      return boost * scale * d * v;
    }
  }
}

inline double sample_chisq(double df, Rng& rng) {
  if (!(df > 0.0)) {
    throw std::domain_error("sample_chisq: df must be positive");
  }
  return sample_gamma(0.5 * df, 2.0, rng);
}

// X/(X+Y) with independent gamma draws.
inline double sample_beta(double a, double b, Rng& rng) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw std::domain_error("sample_beta: parameters must be positive");
  }
  const double x = sample_gamma(a, 1.0, rng);
  const double y = sample_gamma(b, 1.0, rng);
  return x / (x + y);
}

}  // namespace hdit
