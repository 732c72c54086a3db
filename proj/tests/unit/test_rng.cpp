#include "doctest.h"

#include <cmath>
#include <set>
#include <vector>

#include "permtherm/rng.hpp"

using namespace permtherm;

TEST_CASE("streams are reproducible and distinct") {
  const SeedSpec spec{12345};
  Rng a = spec.stream({3, 7});
  Rng b = spec.stream({3, 7});
  for (int i = 0; i < 100; ++i) CHECK(a.bits() == b.bits());

  std::set<std::uint64_t> seeds;
  for (std::uint64_t g = 0; g < 20; ++g)
    for (std::uint64_t s = 0; s < 50; ++s) seeds.insert(spec.derive({g, s}));
  CHECK(seeds.size() == 1000);
  CHECK(spec.derive({1, 2}) != spec.derive({2, 1}));
  CHECK(SeedSpec{1}.derive({0}) != SeedSpec{2}.derive({0}));
}

TEST_CASE("derivation is pinned") {
  // Any change here silently changes every published sweep.
  CHECK(splitmix64(0) == 0xe220a8397b1dcdafULL);
  Rng r(SeedSpec{7}.derive({0, 0}));
  const std::uint64_t first = r.bits();
  Rng again(SeedSpec{7}.derive({0, 0}));
  CHECK(first == again.bits());
}

TEST_CASE("uniform_below is in range and unbiased") {
  Rng rng(99);
  std::vector<int> counts(6, 0);
  const int n = 60000;
  for (int i = 0; i < n; ++i) {
    const auto v = rng.uniform_below(6);
    REQUIRE(v < 6);
    ++counts[v];
  }
  const double sigma = std::sqrt(n * (1.0 / 6) * (5.0 / 6));
  for (int c : counts) CHECK(std::abs(c - n / 6.0) < 4 * sigma);
  CHECK(rng.uniform_below(1) == 0);
}

TEST_CASE("normal variates have unit variance") {
  Rng rng(5);
  const int n = 200000;
  double s = 0, s2 = 0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    s += x;
    s2 += x * x;
  }
  CHECK(std::abs(s / n) < 0.01);
  CHECK(std::abs(s2 / n - 1.0) < 0.02);
}

TEST_CASE("uniform01 stays in [0, 1)") {
  Rng rng(1);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}
