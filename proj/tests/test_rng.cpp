#include <doctest.h>

#include <bit>
#include <cmath>
#include <cstdint>
#include <set>

#include "wmc/rng.hpp"

TEST_SUITE("rng") {

TEST_CASE("same seed reproduces the stream") {
  wmc::Rng a(42), b(42);
  for (int i = 0; i < 256; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("different seeds diverge") {
  wmc::Rng a(1), b(2);
  int collisions = 0;
  for (int i = 0; i < 64; ++i) collisions += a.next_u64() == b.next_u64();
  CHECK(collisions == 0);
}

TEST_CASE("derive depends only on seed and stream, not consumption") {
  wmc::Rng fresh(7);
  wmc::Rng used(7);
  for (int i = 0; i < 1000; ++i) used.next_u64();
  CHECK(fresh.derive(3).seed() == used.derive(3).seed());
  CHECK(fresh.derive(3).next_u64() == wmc::Rng(7).derive(3).next_u64());
}

TEST_CASE("sibling streams get distinct seeds") {
  wmc::Rng root(123);
  std::set<std::uint64_t> seeds;
  for (std::uint64_t k = 0; k < 1000; ++k) seeds.insert(root.derive(k).seed());
  CHECK(seeds.size() == 1000);
}

TEST_CASE("nested derivation distinguishes paths") {
  wmc::Rng root(9);
  CHECK(root.derive(0).derive(1).seed() != root.derive(1).derive(0).seed());
  CHECK(root.derive(0).derive(0).seed() != root.derive(0).seed());
}

TEST_CASE("uniform stays in the half-open unit interval") {
  wmc::Rng rng(5);
  double lo = 1.0, hi = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  CHECK(lo < 0.001);
  CHECK(hi > 0.999);
}

TEST_CASE("uniform mean is near one half") {
  wmc::Rng rng(11);
  const int n = 200000;
  long double acc = 0.0L;
  for (int i = 0; i < n; ++i) acc += rng.uniform();
  const double mean = static_cast<double>(acc / n);
  // sd of the mean is 1/sqrt(12 n); allow five sigma
  CHECK(std::abs(mean - 0.5) < 5.0 / std::sqrt(12.0 * n));
}

TEST_CASE("normal draws have unit variance and zero mean") {
  wmc::Rng rng(13);
  const int n = 200000;
  long double s1 = 0.0L, s2 = 0.0L;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    s1 += x;
    s2 += x * x;
  }
  CHECK(std::abs(static_cast<double>(s1 / n)) < 5.0 / std::sqrt(static_cast<double>(n)));
  CHECK(std::abs(static_cast<double>(s2 / n) - 1.0) < 5.0 * std::sqrt(2.0 / n));
}

TEST_CASE("mix64 scrambles adjacent inputs") {
  CHECK(wmc::mix64(0) != wmc::mix64(1));
  CHECK(wmc::mix64(1) != wmc::mix64(2));
  const int flipped = std::popcount(wmc::mix64(41) ^ wmc::mix64(42));
  CHECK(flipped > 16);
  CHECK(flipped < 48);
}

TEST_CASE("seed accessor returns the constructor value") {
  CHECK(wmc::Rng(999).seed() == 999);
  CHECK(wmc::Rng(0).seed() == 0);
}

}  // TEST_SUITE
