#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace mesmoc {

// Seeded random stream with explicit transforms so that draws are
// bit-reproducible across standard-library versions. Child streams are
// derived from the seed alone, independent of how many values were drawn.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), gen_(mix(seed)) {}

  // Uniform on [0, 1).
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller, one value per call (no cached spare).
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  // Uniform integer in [0, n), n >= 1, without modulo bias.
  std::uint64_t uniform_int(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t r = gen_();
    while (r >= limit) r = gen_();
    return r % n;
  }

  // Independent child stream keyed by (a, b); does not advance this stream.
  Rng spawn(std::uint64_t a, std::uint64_t b = 0) const {
    return Rng(mix(mix(seed_ ^ mix(a + 0x9e3779b97f4a7c15ull)) + b));
  }

  std::uint64_t seed() const { return seed_; }

 private:
  static std::uint64_t mix(std::uint64_t z) {  // splitmix64 finalizer
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
  std::mt19937_64 gen_;
};

}  // namespace mesmoc
