#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wmc/distribution.hpp"
#include "wmc/linalg.hpp"
#include "wmc/sampling.hpp"

namespace wmc {

enum class WeightScheme { uniform, true_sqrt, empirical_sqrt, smoothed, theorem3 };

const char* to_string(WeightScheme scheme);
std::optional<WeightScheme> parse_scheme(std::string_view name);

// Diagonals of the row/column weight matrices. Strictly positive after
// clamping so the scaled problem stays invertible.
struct WeightPair {
  std::vector<double> r_weights;
  std::vector<double> c_weights;
  WeightScheme scheme = WeightScheme::uniform;

  void validate() const;
};

// Index sets of the floor(n / (mu0 * r)) least-magnitude entries of the
// row/column reference vectors.
struct SupportSets {
  std::vector<int> s_r;
  std::vector<int> s_c;
};

struct ConditionReport {
  std::string condition_name;
  bool satisfied = false;
  double margin = 0.0;  // smallest slack over all indices, negative if violated
  int worst_i = -1;
  int worst_j = -1;
};

// Lower clamp keeping weight diagonals invertible.
double weight_floor(int n);

SupportSets support_sets(const std::vector<double>& ref_row, const std::vector<double>& ref_col,
                         int n, double mu0, int r);

WeightPair weights_uniform(int n1, int n2);
WeightPair weights_true_sqrt(const ProductDistribution& d);
WeightPair weights_empirical_sqrt(const EmpiricalEstimate& est);
WeightPair weights_smoothed(const EmpiricalEstimate& est);
std::pair<WeightPair, SupportSets> weights_theorem3(const EmpiricalEstimate& est, double mu0,
                                                    int r);

// Recovery sufficiency conditions. c0 is the universal constant left
// unspecified by the theory; callers choose it, default 1. Reports are
// diagnostics: margin = min slack over all indices, satisfied iff >= 0.
ConditionReport check_theorem1(const ProductDistribution& d_rates, double multiplier,
                               const WeightPair& w, double mu0, int r, double c0 = 1.0);
ConditionReport check_theorem2(const EmpiricalEstimate& est, double sum_p, const WeightPair& w,
                               const SupportSets& sets, double alpha, double c0 = 1.0);
ConditionReport check_theorem3_conditions(const ProductDistribution& d, double mu0, int r,
                                          double alpha, double c0 = 1.0);
ConditionReport check_unweighted(const ProductDistribution& d, double mu0, int r, int n,
                                 double c0 = 1.0);
ConditionReport check_leverage_condition(const Matrix& m, const ProductDistribution& d_rates,
                                         double multiplier, double c0 = 1.0);

std::string to_csv_row(const ConditionReport& report);

}  // namespace wmc
