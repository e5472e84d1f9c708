#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace qmem {

// Seed-stream utilities. All stochastic code in the library derives
// sub-streams with mix_seed so that results depend only on (seed, stream
// index), never on execution order or worker count.

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(seed ^ splitmix64(stream + 0x9E3779B97F4A7C15ULL));
}

/// Standard-normal sampler with a fully specified algorithm (Marsaglia
/// polar on top of mt19937_64), so draws are reproducible across
/// platforms for a given seed. std::normal_distribution is
/// implementation-defined and is deliberately not used.
class NormalSampler {
 public:
  explicit NormalSampler(std::uint64_t seed) : eng_(seed) {}

  double operator()() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double v1, v2, s;
    do {
      v1 = uniform_pm1();
      v2 = uniform_pm1();
      s = v1 * v1 + v2 * v2;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v2 * f;
    has_spare_ = true;
    return v1 * f;
  }

 private:
  // uniform in [-1, 1) from the top 53 bits
  double uniform_pm1() {
    return static_cast<double>(eng_() >> 11) * (2.0 / 9007199254740992.0) - 1.0;
  }

  std::mt19937_64 eng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace qmem
