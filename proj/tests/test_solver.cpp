#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "wmc/distribution.hpp"
#include "wmc/linalg.hpp"
#include "wmc/rng.hpp"
#include "wmc/sampling.hpp"
#include "wmc/solver.hpp"

using wmc::Matrix;
using wmc::Observation;
using wmc::ObservationSet;
using wmc::SolveResult;
using wmc::SolverConfig;
using wmc::WeightPair;

namespace {

ObservationSet observe_all(const Matrix& m) {
  ObservationSet obs;
  obs.rows = static_cast<int>(m.rows());
  obs.cols = static_cast<int>(m.cols());
  for (int i = 0; i < obs.rows; ++i) {
    for (int j = 0; j < obs.cols; ++j) {
      obs.entries.push_back({i, j, m(i, j)});
    }
  }
  return obs;
}

ObservationSet observe_fraction(const Matrix& m, double fraction, std::uint64_t seed) {
  wmc::ProductDistribution d;
  d.row = wmc::uniform_vector(static_cast<int>(m.rows()));
  d.col = wmc::uniform_vector(static_cast<int>(m.cols()));
  return wmc::stage_two_sample(m, d, fraction * m.rows() * m.cols(), seed);
}

WeightPair positive_weights(int n1, int n2, std::uint64_t seed) {
  wmc::Rng rng(seed);
  WeightPair w;
  w.scheme = wmc::WeightScheme::uniform;
  w.r_weights.resize(n1);
  w.c_weights.resize(n2);
  for (double& x : w.r_weights) x = 0.5 + rng.uniform();
  for (double& x : w.c_weights) x = 0.5 + rng.uniform();
  return w;
}

}  // namespace

TEST_SUITE("solver") {

TEST_CASE("full observation returns the matrix itself") {
  const Matrix m = wmc::random_low_rank(12, 3, 42);
  const SolveResult res = wmc::solve_unweighted(observe_all(m), SolverConfig{});
  CHECK(res.converged);
  CHECK(res.status == "converged");
  CHECK(res.final_residual <= SolverConfig{}.tol_feasibility);
  CHECK(wmc::recovery_check(m, res, 1e-5));
}

TEST_CASE("rank one is recovered from seventy percent of the entries") {
  const Matrix m = wmc::random_low_rank(30, 1, 7);
  const ObservationSet obs = observe_fraction(m, 0.7, 11);
  const SolveResult res = wmc::solve_unweighted(obs, SolverConfig{});
  CHECK(res.converged);
  CHECK(wmc::recovery_check(m, res, 1e-5));
}

TEST_CASE("slow penalty growth recovers where the sampling is thin") {
  // at 40 percent observation the fast default schedule converges to a
  // feasible point away from the minimum-norm completion; rho near 1 must
  // still reach the ground truth
  const Matrix m = wmc::random_low_rank(60, 3, 9000);
  const ObservationSet obs = observe_fraction(m, 0.4, 9100);
  SolverConfig cfg;
  cfg.rho = 1.1;
  const SolveResult res = wmc::solve_unweighted(obs, cfg);
  CHECK(res.converged);
  CHECK(wmc::recovery_check(m, res, 1e-5));
}

TEST_CASE("a single observation yields the minimal completion") {
  ObservationSet obs;
  obs.rows = 10;
  obs.cols = 10;
  obs.entries.push_back({3, 7, 2.5});
  const SolveResult res = wmc::solve_unweighted(obs, SolverConfig{});
  CHECK(res.converged);
  CHECK(std::abs(res.matrix(3, 7) - 2.5) <= 2.5 * 1e-7);
  // minimal nuclear norm consistent with one entry of value v is v itself
  CHECK(wmc::nuclear_norm(res.matrix) <= 2.5 + 1e-6);
  CHECK(wmc::singular_values(res.matrix)(1) <= 1e-8);
}

TEST_CASE("empty observation sets are rejected") {
  ObservationSet obs;
  obs.rows = 10;
  obs.cols = 10;
  CHECK_THROWS_AS(wmc::solve_unweighted(obs, SolverConfig{}), std::invalid_argument);
}

TEST_CASE("all-zero observations short-circuit to the zero matrix") {
  ObservationSet obs;
  obs.rows = 6;
  obs.cols = 6;
  obs.entries = {{0, 0, 0.0}, {2, 3, 0.0}, {5, 5, 0.0}};
  const SolveResult res = wmc::solve_unweighted(obs, SolverConfig{});
  CHECK(res.converged);
  CHECK(res.status == "converged");
  CHECK(res.iterations == 0);
  CHECK(res.matrix.norm() == 0.0);
  CHECK(res.final_residual == 0.0);
}

TEST_CASE("objective trace climbs to the solution norm and settles") {
  const Matrix m = wmc::random_low_rank(20, 2, 100);
  const ObservationSet obs = observe_fraction(m, 0.6, 9);
  std::vector<double> trace;
  SolverConfig cfg;
  cfg.objective_trace = &trace;
  const SolveResult res = wmc::solve_unweighted(obs, cfg);
  REQUIRE(res.converged);
  REQUIRE(static_cast<int>(trace.size()) == res.iterations);

  // the iterate starts at zero and approaches the minimizer from below
  CHECK(trace.front() < trace.back());
  CHECK(trace.back() == doctest::Approx(wmc::nuclear_norm(res.matrix)).epsilon(1e-9));
  // after the ramp the oscillation stays small relative to the optimum
  const double slack = 5e-3 * trace.back();
  for (std::size_t k = 5; k + 1 < trace.size(); ++k) {
    REQUIRE(trace[k + 1] <= trace[k] + slack);
  }
  // the tail is flat at convergence scale
  const std::size_t last = trace.size() - 1;
  for (std::size_t k = last - 3; k < last; ++k) {
    REQUIRE(std::abs(trace[k + 1] - trace[k]) <= 1e-5 * trace.back());
  }
}

TEST_CASE("weighted solve is the scaled unweighted solve, unscaled") {
  const Matrix m = wmc::random_low_rank(20, 2, 55);
  const ObservationSet obs = observe_fraction(m, 0.6, 56);
  const WeightPair w = positive_weights(20, 20, 57);

  const SolveResult direct = wmc::solve_weighted(obs, w, SolverConfig{});

  ObservationSet scaled = obs;
  for (Observation& o : scaled.entries) o.value *= w.r_weights[o.i] * w.c_weights[o.j];
  SolveResult manual = wmc::solve_unweighted(scaled, SolverConfig{});
  for (int j = 0; j < 20; ++j) {
    for (int i = 0; i < 20; ++i) {
      manual.matrix(i, j) /= w.r_weights[i] * w.c_weights[j];
    }
  }
  CHECK((direct.matrix - manual.matrix).norm() <= 1e-10);
  CHECK(direct.iterations == manual.iterations);
}

TEST_CASE("identity weights reproduce the unweighted solver exactly") {
  const Matrix m = wmc::random_low_rank(15, 2, 71);
  const ObservationSet obs = observe_fraction(m, 0.7, 72);
  WeightPair w;
  w.r_weights.assign(15, 1.0);
  w.c_weights.assign(15, 1.0);
  const SolveResult a = wmc::solve_weighted(obs, w, SolverConfig{});
  const SolveResult b = wmc::solve_unweighted(obs, SolverConfig{});
  CHECK((a.matrix - b.matrix).norm() == 0.0);
  CHECK(a.iterations == b.iterations);
  CHECK(a.status == b.status);
}

TEST_CASE("solutions are invariant under weight rescaling") {
  const Matrix m = wmc::random_low_rank(20, 2, 81);
  const ObservationSet obs = observe_fraction(m, 0.65, 82);
  const WeightPair w = positive_weights(20, 20, 83);
  WeightPair scaled = w;
  for (double& x : scaled.r_weights) x *= 3.0;
  for (double& x : scaled.c_weights) x *= 0.5;
  const SolveResult a = wmc::solve_weighted(obs, w, SolverConfig{});
  const SolveResult b = wmc::solve_weighted(obs, scaled, SolverConfig{});
  REQUIRE(a.converged);
  REQUIRE(b.converged);
  CHECK((a.matrix - b.matrix).norm() <= 1e-6);
}

TEST_CASE("identical inputs produce identical outputs") {
  const Matrix m = wmc::random_low_rank(18, 2, 91);
  const ObservationSet obs = observe_fraction(m, 0.6, 92);
  const SolveResult a = wmc::solve_unweighted(obs, SolverConfig{});
  const SolveResult b = wmc::solve_unweighted(obs, SolverConfig{});
  CHECK((a.matrix - b.matrix).norm() == 0.0);
  CHECK(a.iterations == b.iterations);
  CHECK(a.final_residual == b.final_residual);
}

TEST_CASE("hitting the iteration cap is reported") {
  const Matrix m = wmc::random_low_rank(16, 2, 13);
  const ObservationSet obs = observe_fraction(m, 0.6, 14);
  SolverConfig cfg;
  cfg.max_iters = 3;
  const SolveResult res = wmc::solve_unweighted(obs, cfg);
  CHECK_FALSE(res.converged);
  CHECK(res.status == "max_iters");
  CHECK(res.iterations == 3);
}

TEST_CASE("a penalty too weak to move the iterate is reported as stalled") {
  // with mu_init <= 1/(rho+1) the first two thresholds exceed the data's
  // top singular value, so both iterates are zero and the solver stops
  const Matrix m = wmc::random_low_rank(10, 2, 21);
  const ObservationSet obs = observe_fraction(m, 0.8, 22);
  SolverConfig cfg;
  cfg.mu_init = 0.1;
  const SolveResult res = wmc::solve_unweighted(obs, cfg);
  CHECK_FALSE(res.converged);
  CHECK(res.status == "stalled");
  CHECK(res.iterations == 2);
  CHECK(res.final_residual == 1.0);
}

TEST_CASE("converged runs meet the feasibility tolerance") {
  for (int t = 0; t < 5; ++t) {
    const Matrix m = wmc::random_low_rank(14 + t, 1 + t % 3, 300 + t);
    const ObservationSet obs = observe_fraction(m, 0.55 + 0.08 * t, 330 + t);
    SolverConfig cfg;
    const SolveResult res = wmc::solve_unweighted(obs, cfg);
    if (res.converged) {
      REQUIRE(res.final_residual <= cfg.tol_feasibility);
      REQUIRE(res.status == "converged");
    }
  }
}

TEST_CASE("recovery check compares Frobenius distance against the tolerance") {
  const Matrix m = wmc::random_low_rank(8, 2, 44);
  SolveResult res;
  res.matrix = m;
  CHECK(wmc::recovery_check(m, res, 1e-5));

  wmc::Rng rng(45);
  Matrix e(8, 8);
  for (int j = 0; j < 8; ++j) {
    for (int i = 0; i < 8; ++i) e(i, j) = rng.normal();
  }
  e /= e.norm();
  res.matrix = m + 1e-4 * e;
  CHECK_FALSE(wmc::recovery_check(m, res, 1e-5));
  CHECK(wmc::recovery_check(m, res, 1e-3));

  res.matrix = Matrix::Zero(8, 7);
  CHECK_THROWS_AS(wmc::recovery_check(m, res, 1e-5), std::invalid_argument);
  res.matrix = m;
  CHECK_THROWS_AS(wmc::recovery_check(m, res, 0.0), std::invalid_argument);
}

TEST_CASE("solver config validation rejects bad parameters") {
  SolverConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.tol_feasibility = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = SolverConfig{};
  cfg.max_iters = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = SolverConfig{};
  cfg.mu_init = -1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = SolverConfig{};
  cfg.rho = 1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = SolverConfig{};
  cfg.recovery_tol = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = SolverConfig{};
  cfg.mu_max = cfg.mu_init / 2.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("a penalty ceiling that never binds leaves the iteration unchanged") {
  const Matrix m = wmc::random_low_rank(16, 2, 71);
  const ObservationSet obs = observe_fraction(m, 0.8, 72);
  SolverConfig capped;
  capped.mu_max = 1e12;
  const SolveResult a = wmc::solve_unweighted(obs, SolverConfig{});
  const SolveResult b = wmc::solve_unweighted(obs, capped);
  CHECK((a.matrix - b.matrix).norm() == 0.0);
  CHECK(a.iterations == b.iterations);
  CHECK(a.final_residual == b.final_residual);
}

TEST_CASE("weight vectors must match the observation shape and be positive") {
  const Matrix m = wmc::random_low_rank(10, 1, 61);
  const ObservationSet obs = observe_fraction(m, 0.8, 62);
  WeightPair w;
  w.r_weights.assign(9, 1.0);
  w.c_weights.assign(10, 1.0);
  CHECK_THROWS_AS(wmc::solve_weighted(obs, w, SolverConfig{}), std::invalid_argument);
  w.r_weights.assign(10, 1.0);
  w.r_weights[4] = 0.0;
  CHECK_THROWS_AS(wmc::solve_weighted(obs, w, SolverConfig{}), std::invalid_argument);
}

}  // TEST_SUITE
