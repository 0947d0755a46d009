#include "wmc/weights.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace wmc {

namespace {

int support_size(int n, double mu0, int r) {
  if (n < 1) throw std::invalid_argument("support size: n must be >= 1");
  if (!(mu0 > 0.0)) throw std::invalid_argument("support size: mu0 must be > 0");
  if (r < 1) throw std::invalid_argument("support size: r must be >= 1");
  const int k = static_cast<int>(std::floor(static_cast<double>(n) / (mu0 * r)));
  if (k < 1) {
    throw std::invalid_argument("support size: floor(n / (mu0 * r)) < 1, weights undefined");
  }
  return std::min(k, n);
}

// Indices of the k smallest entries, ties broken by smallest index.
std::vector<int> smallest_k(const std::vector<double>& ref, int k) {
  std::vector<int> idx(ref.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&ref](int a, int b) { return ref[a] < ref[b]; });
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return idx;
}

double sum_over(const std::vector<double>& v, const std::vector<int>& idx) {
  long double acc = 0.0L;
  for (int i : idx) acc += v[i];
  return static_cast<double>(acc);
}

// Sum of squares of the k smallest entries after sorting ascending.
double sorted_prefix_square_sum(const std::vector<double>& v, int k) {
  std::vector<double> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  long double acc = 0.0L;
  for (int i = 0; i < k; ++i) acc += static_cast<long double>(sorted[i]) * sorted[i];
  return static_cast<double>(acc);
}

std::vector<double> clamped_sqrt(const std::vector<double>& p, double floor_value,
                                 bool* clamped_any) {
  std::vector<double> w(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double s = std::sqrt(p[i]);
    if (s < floor_value) {
      w[i] = floor_value;
      if (clamped_any) *clamped_any = true;
    } else {
      w[i] = s;
    }
  }
  return w;
}

double log2_2n(int n) {
  const double l = std::log(2.0 * n);
  return l * l;
}

int require_square(const ProductDistribution& d, const char* who) {
  if (d.row.size() != d.col.size()) {
    throw std::invalid_argument(std::string(who) + ": square case required");
  }
  return d.row.size();
}

}  // namespace

const char* to_string(WeightScheme scheme) {
  switch (scheme) {
    case WeightScheme::uniform: return "uniform";
    case WeightScheme::true_sqrt: return "true_sqrt";
    case WeightScheme::empirical_sqrt: return "empirical_sqrt";
    case WeightScheme::smoothed: return "smoothed";
    case WeightScheme::theorem3: return "theorem3";
  }
  return "unknown";
}

std::optional<WeightScheme> parse_scheme(std::string_view name) {
  if (name == "uniform") return WeightScheme::uniform;
  if (name == "true_sqrt") return WeightScheme::true_sqrt;
  if (name == "empirical_sqrt") return WeightScheme::empirical_sqrt;
  if (name == "smoothed") return WeightScheme::smoothed;
  if (name == "theorem3") return WeightScheme::theorem3;
  return std::nullopt;
}

void WeightPair::validate() const {
  if (r_weights.empty() || c_weights.empty()) {
    throw std::invalid_argument("WeightPair: empty weight vector");
  }
  for (double w : r_weights) {
    if (!std::isfinite(w) || w <= 0.0) {
      throw std::invalid_argument("WeightPair: row weights must be finite and > 0");
    }
  }
  for (double w : c_weights) {
    if (!std::isfinite(w) || w <= 0.0) {
      throw std::invalid_argument("WeightPair: col weights must be finite and > 0");
    }
  }
}

double weight_floor(int n) { return 1e-6 / static_cast<double>(n); }

SupportSets support_sets(const std::vector<double>& ref_row, const std::vector<double>& ref_col,
                         int n, double mu0, int r) {
  if (static_cast<int>(ref_row.size()) != n || static_cast<int>(ref_col.size()) != n) {
    throw std::invalid_argument("support_sets: reference vectors must have length n");
  }
  const int k = support_size(n, mu0, r);
  SupportSets sets;
  sets.s_r = smallest_k(ref_row, k);
  sets.s_c = smallest_k(ref_col, k);
  return sets;
}

WeightPair weights_uniform(int n1, int n2) {
  if (n1 < 1 || n2 < 1) throw std::invalid_argument("weights_uniform: bad shape");
  WeightPair w;
  w.scheme = WeightScheme::uniform;
  w.r_weights.assign(n1, 1.0 / n1);
  w.c_weights.assign(n2, 1.0 / n2);
  return w;
}

WeightPair weights_true_sqrt(const ProductDistribution& d) {
  d.validate();
  if (!d.normalized()) throw std::invalid_argument("weights_true_sqrt: d must be normalized");
  WeightPair w;
  w.scheme = WeightScheme::true_sqrt;
  bool clamped = false;
  w.r_weights = clamped_sqrt(d.row.weights, weight_floor(d.row.size()), &clamped);
  w.c_weights = clamped_sqrt(d.col.weights, weight_floor(d.col.size()), &clamped);
  if (clamped) {
    std::fprintf(stderr,
                 "warning: weights_true_sqrt clamped zero-probability entries to the floor\n");
  }
  return w;
}

WeightPair weights_empirical_sqrt(const EmpiricalEstimate& est) {
  WeightPair w;
  w.scheme = WeightScheme::empirical_sqrt;
  const ProbabilityVector hr = est.row_hat();
  const ProbabilityVector hc = est.col_hat();
  w.r_weights = clamped_sqrt(hr.weights, weight_floor(hr.size()), nullptr);
  w.c_weights = clamped_sqrt(hc.weights, weight_floor(hc.size()), nullptr);
  return w;
}

WeightPair weights_smoothed(const EmpiricalEstimate& est) {
  WeightPair w;
  w.scheme = WeightScheme::smoothed;
  const ProbabilityVector hr = est.row_hat();
  const ProbabilityVector hc = est.col_hat();
  w.r_weights.resize(hr.size());
  w.c_weights.resize(hc.size());
  for (int i = 0; i < hr.size(); ++i) {
    w.r_weights[i] = 0.5 * std::sqrt(hr.weights[i]) + 0.5 / hr.size();
  }
  for (int j = 0; j < hc.size(); ++j) {
    w.c_weights[j] = 0.5 * std::sqrt(hc.weights[j]) + 0.5 / hc.size();
  }
  return w;
}

std::pair<WeightPair, SupportSets> weights_theorem3(const EmpiricalEstimate& est, double mu0,
                                                    int r) {
  const int n = static_cast<int>(est.row_counts.size());
  if (static_cast<int>(est.col_counts.size()) != n) {
    throw std::invalid_argument("weights_theorem3: square case required");
  }
  const ProbabilityVector hr = est.row_hat();
  const ProbabilityVector hc = est.col_hat();
  const SupportSets sets = support_sets(hr.weights, hc.weights, n, mu0, r);
  const double sum_r = sum_over(hr.weights, sets.s_r);
  const double sum_c = sum_over(hc.weights, sets.s_c);

  WeightPair w;
  w.scheme = WeightScheme::theorem3;
  w.r_weights.resize(n);
  w.c_weights.resize(n);
  const double floor_value = weight_floor(n);
  for (int i = 0; i < n; ++i) {
    w.r_weights[i] = std::max(std::sqrt(hr.weights[i] * sum_c / n), floor_value);
  }
  for (int j = 0; j < n; ++j) {
    w.c_weights[j] = std::max(std::sqrt(hc.weights[j] * sum_r / n), floor_value);
  }
  return {w, sets};
}

ConditionReport check_theorem1(const ProductDistribution& d_rates, double multiplier,
                               const WeightPair& w, double mu0, int r, double c0) {
  d_rates.validate();
  w.validate();
  const int n = require_square(d_rates, "check_theorem1");
  if (static_cast<int>(w.r_weights.size()) != n || static_cast<int>(w.c_weights.size()) != n) {
    throw std::invalid_argument("check_theorem1: weight length mismatch");
  }
  if (!(c0 > 0.0)) throw std::invalid_argument("check_theorem1: c0 must be > 0");
  const int k = support_size(n, mu0, r);
  const double sum_r2 = sorted_prefix_square_sum(w.r_weights, k);
  const double sum_c2 = sorted_prefix_square_sum(w.c_weights, k);
  const double scale = c0 * log2_2n(n);
  const double floor10 = std::pow(static_cast<double>(n), -10.0);

  ConditionReport report;
  report.condition_name = "theorem1";
  double margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const double term_r = w.r_weights[i] * w.r_weights[i] / sum_r2;
    for (int j = 0; j < n; ++j) {
      const double p = std::min(1.0, multiplier * d_rates.value(i, j));
      const double rhs = scale * (term_r + w.c_weights[j] * w.c_weights[j] / sum_c2);
      const double local = std::min(p - rhs, p - floor10);
      if (local < margin) {
        margin = local;
        report.worst_i = i;
        report.worst_j = j;
      }
    }
  }
  report.margin = margin;
  report.satisfied = margin >= 0.0;
  return report;
}

ConditionReport check_theorem2(const EmpiricalEstimate& est, double sum_p, const WeightPair& w,
                               const SupportSets& sets, double alpha, double c0) {
  w.validate();
  const int n = static_cast<int>(est.row_counts.size());
  if (static_cast<int>(est.col_counts.size()) != n) {
    throw std::invalid_argument("check_theorem2: square case required");
  }
  if (static_cast<int>(w.r_weights.size()) != n || static_cast<int>(w.c_weights.size()) != n) {
    throw std::invalid_argument("check_theorem2: weight length mismatch");
  }
  if (!(alpha > 0.0)) throw std::invalid_argument("check_theorem2: alpha must be > 0");
  if (!(sum_p > 0.0)) throw std::invalid_argument("check_theorem2: sum_p must be > 0");
  if (!(c0 > 0.0)) throw std::invalid_argument("check_theorem2: c0 must be > 0");

  std::vector<double> r2(w.r_weights.size()), c2(w.c_weights.size());
  for (std::size_t i = 0; i < r2.size(); ++i) r2[i] = w.r_weights[i] * w.r_weights[i];
  for (std::size_t j = 0; j < c2.size(); ++j) c2[j] = w.c_weights[j] * w.c_weights[j];
  const double sum_r2 = sum_over(r2, sets.s_r);
  const double sum_c2 = sum_over(c2, sets.s_c);
  const double one_plus = 1.0 + alpha;
  const double scale = (one_plus * one_plus / sum_p) * c0 * log2_2n(n);

  const ProbabilityVector hr = est.row_hat();
  const ProbabilityVector hc = est.col_hat();
  ConditionReport report;
  report.condition_name = "theorem2";
  double margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const double term_r = r2[i] / sum_r2;
    for (int j = 0; j < n; ++j) {
      const double rhs = scale * (term_r + c2[j] / sum_c2);
      const double local = hr.weights[i] * hc.weights[j] - rhs;
      if (local < margin) {
        margin = local;
        report.worst_i = i;
        report.worst_j = j;
      }
    }
  }
  report.margin = margin;
  report.satisfied = margin >= 0.0;
  return report;
}

ConditionReport check_theorem3_conditions(const ProductDistribution& d, double mu0, int r,
                                          double alpha, double c0) {
  d.validate();
  const int n = require_square(d, "check_theorem3_conditions");
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("check_theorem3_conditions: alpha must lie in (0, 1)");
  }
  if (!(c0 > 0.0)) throw std::invalid_argument("check_theorem3_conditions: c0 must be > 0");
  const SupportSets sets = support_sets(d.row.weights, d.col.weights, n, mu0, r);
  const double sum_r = sum_over(d.row.weights, sets.s_r);
  const double sum_c = sum_over(d.col.weights, sets.s_c);
  const double one_plus = 1.0 + alpha;
  const double one_minus = 1.0 - alpha;
  const double threshold =
      c0 * (2.0 * one_plus * one_plus / (one_minus * one_minus)) * log2_2n(n);

  ConditionReport report;
  report.condition_name = "theorem3";
  double margin = std::numeric_limits<double>::infinity();
  for (int j = 0; j < n; ++j) {
    const double local = d.col.weights[j] * sum_r - threshold;
    if (local < margin) {
      margin = local;
      report.worst_i = -1;
      report.worst_j = j;
    }
  }
  for (int i = 0; i < n; ++i) {
    const double local = d.row.weights[i] * sum_c - threshold;
    if (local < margin) {
      margin = local;
      report.worst_i = i;
      report.worst_j = -1;
    }
  }
  report.margin = margin;
  report.satisfied = margin >= 0.0;
  return report;
}

ConditionReport check_unweighted(const ProductDistribution& d, double mu0, int r, int n,
                                 double c0) {
  d.validate();
  if (require_square(d, "check_unweighted") != n) {
    throw std::invalid_argument("check_unweighted: n mismatch");
  }
  if (!(mu0 > 0.0) || r < 1) throw std::invalid_argument("check_unweighted: bad mu0 or r");
  if (!(c0 > 0.0)) throw std::invalid_argument("check_unweighted: c0 must be > 0");
  const double threshold = c0 * (mu0 * static_cast<double>(r) / n) * log2_2n(n);

  // Product of nonnegative factors is minimized at the factor minima.
  const auto [wi, min_r] = min_component(d.row);
  const auto [wj, min_c] = min_component(d.col);
  ConditionReport report;
  report.condition_name = "unweighted";
  report.worst_i = wi;
  report.worst_j = wj;
  report.margin = min_r * min_c - threshold;
  report.satisfied = report.margin >= 0.0;
  return report;
}

ConditionReport check_leverage_condition(const Matrix& m, const ProductDistribution& d_rates,
                                         double multiplier, double c0) {
  d_rates.validate();
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("check_leverage_condition: square case required");
  }
  const int n = static_cast<int>(m.rows());
  if (d_rates.row.size() != n || d_rates.col.size() != n) {
    throw std::invalid_argument("check_leverage_condition: shape mismatch");
  }
  if (!(c0 > 0.0)) throw std::invalid_argument("check_leverage_condition: c0 must be > 0");
  const LeverageScores lv = leverage_scores(m);
  const double scale = c0 * static_cast<double>(lv.rank) * log2_2n(n) / n;

  ConditionReport report;
  report.condition_name = "leverage";
  double margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double p = std::min(1.0, multiplier * d_rates.value(i, j));
      const double rhs =
          std::min(scale * (lv.row_scores(i) + lv.col_scores(j)), 1.0);
      const double local = p - rhs;
      if (local < margin) {
        margin = local;
        report.worst_i = i;
        report.worst_j = j;
      }
    }
  }
  report.margin = margin;
  report.satisfied = margin >= 0.0;
  return report;
}

std::string to_csv_row(const ConditionReport& report) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%s,%d,%.9g,%d,%d", report.condition_name.c_str(),
                report.satisfied ? 1 : 0, report.margin, report.worst_i, report.worst_j);
  return std::string(buf);
}

}  // namespace wmc
