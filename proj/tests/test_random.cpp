#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>
#include <vector>

#include "mtd/random.hpp"

using mtd::RandomSource;

TEST_CASE("same seed gives the same stream") {
  RandomSource a(99), b(99);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("derived seeds differ across indices and parents") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t s = 0; s < 20; ++s) {
    for (std::uint64_t i = 0; i < 50; ++i) seen.insert(mtd::derive_seed(s, i));
  }
  CHECK(seen.size() == 1000);
  CHECK(mtd::derive_seed(1, 2) != mtd::derive_seed(2, 1));
}

TEST_CASE("uniform stays in [0, 1) with the right mean") {
  RandomSource rng(5);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.005));
}

TEST_CASE("bernoulli edges are deterministic") {
  RandomSource rng(1);
  for (int i = 0; i < 1000; ++i) {
    CHECK_FALSE(rng.bernoulli(0.0));
    CHECK(rng.bernoulli(1.0));
  }
}

TEST_CASE("index is bounded and roughly uniform") {
  RandomSource rng(17);
  std::vector<int> hits(7, 0);
  const int n = 70000;
  for (int i = 0; i < n; ++i) {
    const auto k = rng.index(7);
    REQUIRE(k < 7);
    ++hits[k];
  }
  for (int h : hits) CHECK(h == doctest::Approx(n / 7.0).epsilon(0.05));
  CHECK(rng.index(1) == 0);
}

TEST_CASE("shuffle permutes") {
  RandomSource rng(3);
  for (int round = 0; round < 100; ++round) {
    std::vector<int> v(13);
    std::iota(v.begin(), v.end(), 0);
    rng.shuffle(std::span<int>(v));
    auto sorted = v;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < 13; ++i) REQUIRE(sorted[i] == i);
  }
}

TEST_CASE("shuffle places every element everywhere about equally") {
  RandomSource rng(8);
  int first_is_zero = 0;
  const int n = 40000;
  for (int round = 0; round < n; ++round) {
    std::vector<int> v{0, 1, 2, 3};
    rng.shuffle(std::span<int>(v));
    first_is_zero += v[0] == 0;
  }
  CHECK(first_is_zero / double(n) == doctest::Approx(0.25).epsilon(0.04));
}
