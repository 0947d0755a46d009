#pragma once

#include <utility>
#include <vector>

namespace wmc {

// Sum with long-double accumulation; keeps normalization checks tight
// for vectors up to ~1e4 entries.
double stable_sum(const std::vector<double>& v);

// Nonnegative vector of per-index probabilities or unnormalized rates.
struct ProbabilityVector {
  std::vector<double> weights;
  bool normalized = false;

  int size() const { return static_cast<int>(weights.size()); }
  double sum() const { return stable_sum(weights); }

  // Entries finite and >= 0, at least one positive; if the normalized
  // flag is set, the sum must be within 1e-12 of one.
  void validate() const;
};

ProbabilityVector power_law(int n, double exponent);
ProbabilityVector uniform_vector(int n);
ProbabilityVector normalize(const ProbabilityVector& p);
std::pair<int, double> min_component(const ProbabilityVector& p);

// Rank-one sampling distribution p_ij = row_i * col_j.
struct ProductDistribution {
  ProbabilityVector row;
  ProbabilityVector col;

  bool normalized() const { return row.normalized && col.normalized; }
  double value(int i, int j) const { return row.weights[i] * col.weights[j]; }
  double total() const { return row.sum() * col.sum(); }
  void validate() const;
};

// Open interval (0, upper) of concentration parameters for which
// alpha * min(min_i row, min_j col) stays at most one.
struct AlphaInterval {
  double upper = 0.0;
  bool contains(double alpha) const { return alpha > 0.0 && alpha < upper; }
};

AlphaInterval alpha_range(const ProductDistribution& d);

}  // namespace wmc
