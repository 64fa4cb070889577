#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "mesmoc/rng.hpp"

using namespace mesmoc;

TEST_CASE("same seed reproduces the same stream") {
  Rng a(1234), b(1234);
  for (int i = 0; i < 100; ++i) {
    CHECK(a.uniform() == b.uniform());
  }
  Rng c(1234), d(1235);
  bool all_equal = true;
  for (int i = 0; i < 16; ++i) {
    if (c.uniform() != d.uniform()) all_equal = false;
  }
  CHECK_FALSE(all_equal);
}

TEST_CASE("uniform stays in [0,1) and bounded uniform in range") {
  Rng rng(7);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  for (int i = 0; i < 1000; ++i) {
    const double u = rng.uniform(-2.5, 3.5);
    CHECK(u >= -2.5);
    CHECK(u < 3.5);
  }
}

TEST_CASE("uniform_int covers [0,n) without escaping") {
  Rng rng(42);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 2000; ++i) {
    const std::uint64_t v = rng.uniform_int(7);
    CHECK(v < 7);
    seen.insert(v);
  }
  CHECK(seen.size() == 7);
  for (int i = 0; i < 100; ++i) CHECK(rng.uniform_int(1) == 0);
}

TEST_CASE("normal draws have roughly standard moments") {
  Rng rng(2024);
  const int n = 200000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    sum += z;
    sumsq += z * z;
  }
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;
  CHECK(std::abs(mean) < 0.02);
  CHECK(std::abs(var - 1.0) < 0.03);
}

TEST_CASE("spawn is independent of parent draw count") {
  Rng a(99), b(99);
  for (int i = 0; i < 57; ++i) (void)b.uniform();  // advance b only
  Rng ca = a.spawn(3, 11);
  Rng cb = b.spawn(3, 11);
  for (int i = 0; i < 20; ++i) {
    CHECK(ca.uniform() == cb.uniform());
  }
}

TEST_CASE("spawn keys produce distinct streams") {
  Rng root(5);
  std::vector<Rng> kids;
  for (std::uint64_t a = 0; a < 4; ++a)
    for (std::uint64_t b = 0; b < 4; ++b) kids.push_back(root.spawn(a, b));
  std::set<std::uint64_t> seeds;
  for (const Rng& k : kids) seeds.insert(k.seed());
  CHECK(seeds.size() == kids.size());
  // First draws should not coincide across sibling streams.
  std::set<double> firsts;
  for (Rng& k : kids) firsts.insert(k.uniform());
  CHECK(firsts.size() == kids.size());
}

TEST_CASE("spawning does not advance the parent stream") {
  Rng a(17), b(17);
  (void)a.spawn(1);
  (void)a.spawn(2, 9);
  for (int i = 0; i < 10; ++i) CHECK(a.uniform() == b.uniform());
}
