#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "wmc/distribution.hpp"
#include "wmc/rng.hpp"

using wmc::ProbabilityVector;
using wmc::ProductDistribution;

namespace {

ProbabilityVector vec(std::vector<double> w, bool normalized = false) {
  ProbabilityVector p;
  p.weights = std::move(w);
  p.normalized = normalized;
  return p;
}

}  // namespace

TEST_SUITE("distribution") {

TEST_CASE("stable sum adds exactly on small integers") {
  CHECK(wmc::stable_sum({1.0, 2.0, 3.0}) == 6.0);
  CHECK(wmc::stable_sum({}) == 0.0);
}

TEST_CASE("power law with a single point is the unit mass") {
  const ProbabilityVector p = wmc::power_law(1, 2.7);
  REQUIRE(p.size() == 1);
  CHECK(p.weights[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(p.normalized);
}

TEST_CASE("power law matches direct evaluation at four points") {
  const ProbabilityVector p = wmc::power_law(4, 1.2);
  const double z =
      1.0 + std::pow(2.0, -1.2) + std::pow(3.0, -1.2) + std::pow(4.0, -1.2);
  REQUIRE(p.size() == 4);
  CHECK(p.weights[0] == doctest::Approx(1.0 / z).epsilon(1e-14));
  CHECK(p.weights[1] == doctest::Approx(std::pow(2.0, -1.2) / z).epsilon(1e-14));
  CHECK(p.weights[2] == doctest::Approx(std::pow(3.0, -1.2) / z).epsilon(1e-14));
  CHECK(p.weights[3] == doctest::Approx(std::pow(4.0, -1.2) / z).epsilon(1e-14));
}

TEST_CASE("power law is strictly decreasing and tightly normalized at n=10000") {
  const ProbabilityVector p = wmc::power_law(10000, 1.2);
  for (int i = 1; i < p.size(); ++i) REQUIRE(p.weights[i] < p.weights[i - 1]);
  CHECK(std::abs(p.sum() - 1.0) <= 1e-12);
  CHECK_NOTHROW(p.validate());
}

TEST_CASE("power law rejects bad arguments") {
  CHECK_THROWS_AS(wmc::power_law(0, 1.2), std::invalid_argument);
  CHECK_THROWS_AS(wmc::power_law(4, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(wmc::power_law(4, -1.0), std::invalid_argument);
}

TEST_CASE("normalize splits equal mass evenly") {
  const ProbabilityVector out = wmc::normalize(vec({2.0, 2.0}));
  CHECK(out.weights[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(out.weights[1] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(out.normalized);
}

TEST_CASE("normalize preserves proportions") {
  const ProbabilityVector out = wmc::normalize(vec({1.0, 3.0, 4.0}));
  CHECK(out.weights[0] == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(out.weights[1] == doctest::Approx(0.375).epsilon(1e-15));
  CHECK(out.weights[2] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("normalize is idempotent bit for bit") {
  wmc::Rng rng(6);
  std::vector<double> w(37);
  for (double& x : w) x = rng.uniform() + 0.01;
  const ProbabilityVector once = wmc::normalize(vec(w));
  const ProbabilityVector twice = wmc::normalize(once);
  REQUIRE(once.size() == twice.size());
  for (int i = 0; i < once.size(); ++i) CHECK(once.weights[i] == twice.weights[i]);
  CHECK(twice.normalized);
}

TEST_CASE("normalize rejects a zero vector") {
  CHECK_THROWS_AS(wmc::normalize(vec({0.0, 0.0})), std::invalid_argument);
}

TEST_CASE("min component finds the smallest entry, first index on ties") {
  CHECK(wmc::min_component(vec({0.5, 0.5})) == std::pair<int, double>(0, 0.5));
  CHECK(wmc::min_component(vec({0.3, 0.1, 0.6})) == std::pair<int, double>(1, 0.1));
  CHECK(wmc::min_component(wmc::power_law(4, 1.2)).first == 3);
}

TEST_CASE("probability vector validation catches bad content") {
  CHECK_THROWS_AS(vec({}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(vec({-0.1, 1.1}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(vec({0.0, 0.0}).validate(), std::invalid_argument);
  // flagged normalized but the sum is off
  CHECK_THROWS_AS(vec({0.5, 0.6}, true).validate(), std::invalid_argument);
  CHECK_NOTHROW(vec({0.5, 0.5}, true).validate());
  CHECK_NOTHROW(vec({0.5, 0.6}).validate());
}

TEST_CASE("uniform vector is normalized with equal entries") {
  const ProbabilityVector u = wmc::uniform_vector(8);
  CHECK(u.normalized);
  for (double w : u.weights) CHECK(w == doctest::Approx(0.125).epsilon(1e-15));
  CHECK_THROWS_AS(wmc::uniform_vector(0), std::invalid_argument);
}

TEST_CASE("product distribution evaluates the rank-one product") {
  ProductDistribution d;
  d.row = vec({0.25, 0.75}, true);
  d.col = vec({0.5, 0.5}, true);
  CHECK(d.value(0, 1) == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(d.value(1, 0) == doctest::Approx(0.375).epsilon(1e-15));
  CHECK(d.total() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(d.normalized());
}

TEST_CASE("unnormalized factors report an unnormalized product") {
  ProductDistribution d;
  d.row = vec({2.0, 2.0});
  d.col = vec({1.0, 1.0, 1.0});
  CHECK_FALSE(d.normalized());
  CHECK(d.total() == doctest::Approx(12.0).epsilon(1e-15));
  CHECK_NOTHROW(d.validate());
}

TEST_CASE("alpha range on the two-by-two uniform") {
  ProductDistribution d;
  d.row = wmc::uniform_vector(2);
  d.col = wmc::uniform_vector(2);
  CHECK(wmc::alpha_range(d).upper == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("alpha range on the n-by-n uniform is n") {
  ProductDistribution d;
  d.row = wmc::uniform_vector(25);
  d.col = wmc::uniform_vector(25);
  CHECK(wmc::alpha_range(d).upper == doctest::Approx(25.0).epsilon(1e-12));
}

TEST_CASE("alpha range takes the larger of the factor minima") {
  ProductDistribution d;
  d.row = vec({0.9, 0.1}, true);
  d.col = vec({0.95, 0.05}, true);
  CHECK(wmc::alpha_range(d).upper == doctest::Approx(10.0).epsilon(1e-12));
}

TEST_CASE("alpha range requires normalized factors") {
  ProductDistribution d;
  d.row = vec({0.9, 0.1});
  d.col = vec({0.5, 0.5}, true);
  CHECK_THROWS_AS(wmc::alpha_range(d), std::invalid_argument);
}

TEST_CASE("any alpha inside the range keeps both scaled minima at most one") {
  wmc::Rng rng(14);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> a(5), b(7);
    for (double& x : a) x = rng.uniform() + 1e-3;
    for (double& x : b) x = rng.uniform() + 1e-3;
    ProductDistribution d;
    d.row = wmc::normalize(vec(a));
    d.col = wmc::normalize(vec(b));
    const wmc::AlphaInterval range = wmc::alpha_range(d);
    for (double f : {0.1, 0.5, 0.999}) {
      const double alpha = f * range.upper;
      REQUIRE(range.contains(alpha));
      REQUIRE(alpha * wmc::min_component(d.row).second <= 1.0 + 1e-12);
      REQUIRE(alpha * wmc::min_component(d.col).second <= 1.0 + 1e-12);
    }
    REQUIRE_FALSE(range.contains(range.upper));
    REQUIRE_FALSE(range.contains(0.0));
    REQUIRE_FALSE(range.contains(-1.0));
  }
}

}  // TEST_SUITE
