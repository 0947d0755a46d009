#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "wmc/distribution.hpp"
#include "wmc/linalg.hpp"
#include "wmc/rng.hpp"

namespace wmc {

struct IndexPair {
  int i = 0;
  int j = 0;
};

// Counts from m i.i.d. index-pair draws. The counts are the source of
// truth: they sum to m exactly, the hat vectors are counts / m.
struct EmpiricalEstimate {
  std::vector<std::int64_t> row_counts;
  std::vector<std::int64_t> col_counts;
  std::int64_t m = 0;

  ProbabilityVector row_hat() const;
  ProbabilityVector col_hat() const;
  double hat(int i, int j) const;  // p-hat_ij = row_hat[i] * col_hat[j]
};

struct Observation {
  int i = 0;
  int j = 0;
  double value = 0.0;
};

// Revealed entries; indices unique and sorted row-major.
struct ObservationSet {
  int rows = 0;
  int cols = 0;
  std::vector<Observation> entries;

  bool empty() const { return entries.empty(); }
  void validate() const;
};

// Cumulative-probability table for O(log n) categorical draws.
class CumulativeTable {
 public:
  explicit CumulativeTable(const std::vector<double>& weights);
  int draw(Rng& rng) const;

 private:
  std::vector<double> cdf_;
  int last_positive_ = 0;
};

// m i.i.d. pairs from d; row index drawn before column index per pair.
std::vector<IndexPair> draw_pairs(const ProductDistribution& d, std::int64_t m, Rng& rng);

EmpiricalEstimate empirical_from_pairs(const std::vector<IndexPair>& pairs, int n1, int n2);

// Stage one: draw m pairs, return the per-index empirical estimators.
EmpiricalEstimate stage_one_sample(const ProductDistribution& d, std::int64_t m,
                                   std::uint64_t seed);

// Stage two: reveal each entry independently with probability
// min(1, multiplier * rates_ij).
ObservationSet stage_two_sample(const Matrix& m, const ProductDistribution& rates,
                                double multiplier, std::uint64_t seed);

// Distinct pairs among the draws, with their matrix values.
ObservationSet observe_pairs(const Matrix& m, const std::vector<IndexPair>& pairs);

// Monte Carlo mean fraction of distinct entries hit by m draws, per m.
std::vector<std::pair<std::int64_t, double>> unique_fraction_curve(
    const ProductDistribution& d, const std::vector<std::int64_t>& m_grid,
    std::pair<int, int> shape, const std::vector<std::uint64_t>& seeds);

}  // namespace wmc
