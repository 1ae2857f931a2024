#pragma once

#include <cstdint>
#include <random>

#include "lazyoco/vec.hpp"

namespace lazyoco {

// splitmix64 finalizer, used to turn seed components into engine seeds.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
  return mix64(mix64(a) ^ (0x9e3779b97f4a7c15ULL + b));
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return mix64(mix64(a, b), c);
}

// Seeded pseudo-random stream. Distinct (seed, stream) pairs yield
// independent streams; a single stream must not be shared across
// concurrent callers.
class SplitRng {
 public:
  explicit SplitRng(std::uint64_t seed) : engine_(mix64(seed)) {}
  SplitRng(std::uint64_t seed, std::uint64_t stream) : engine_(mix64(seed, stream)) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1).
  double uniform() {
    return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
  }

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform();
  }

  double normal() {
    return std::normal_distribution<double>(0.0, 1.0)(engine_);
  }

  double normal(double mean, double std) { return mean + std * normal(); }

  Vec normal_vec(const Vec& mean, double std) {
    Vec out(mean.size());
    for (std::size_t i = 0; i < mean.size(); ++i) out[i] = normal(mean[i], std);
    return out;
  }

  bool bernoulli(double p) { return uniform() < p; }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace lazyoco
