#pragma once

#include <cstdint>
#include <cmath>
#include <random>

#include "raftjamsec/specfun.hpp"

namespace raftjamsec {

// SplitMix64 finalizer. Used to derive independent substream seeds from a
// (seed, stream, index) triple so that Monte Carlo trials can be partitioned
// across workers in any order without changing a single draw.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t substream(std::uint64_t seed, std::uint64_t stream,
                               std::uint64_t index) {
  return mix64(mix64(seed ^ 0x6a09e667f3bcc909ULL * (stream + 1)) + index);
}

// Deterministic random stream. The engine is std::mt19937_64 (fully specified
// by the standard); all variate transforms are explicit so results are
// reproducible across platforms and library versions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // uniform on [0, 1), 53-bit resolution
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // uniform on (0, 1): never returns an exact endpoint
  double uniform_open() {
    double u;
    do {
      u = uniform();
    } while (u == 0.0);
    return u;
  }

  // Exp(1); the |h|^2 law for h ~ CN(0,1)
  double exponential() { return -std::log(uniform_open()); }

  // N(0,1) by inverse-CDF so exactly one uniform is consumed per variate
  double normal() { return q_inverse(uniform_open()); }

  // Exact Poisson sampling by counting unit-rate exponential arrivals in
  // [0, lambda]. O(lambda) draws; fine for the intensities used here.
  std::uint64_t poisson(double lambda) {
    if (lambda <= 0.0) return 0;
    std::uint64_t n = 0;
    double t = exponential();
    while (t <= lambda) {
      ++n;
      t += exponential();
    }
    return n;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace raftjamsec
