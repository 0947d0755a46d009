#include "wmc/distribution.hpp"

#include <cmath>
#include <stdexcept>

namespace wmc {

double stable_sum(const std::vector<double>& v) {
  long double acc = 0.0L;
  for (double x : v) acc += x;
  return static_cast<double>(acc);
}

void ProbabilityVector::validate() const {
  if (weights.empty()) throw std::invalid_argument("ProbabilityVector: empty");
  bool any_positive = false;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) {
      throw std::invalid_argument("ProbabilityVector: entries must be finite and >= 0");
    }
    if (w > 0.0) any_positive = true;
  }
  if (!any_positive) throw std::invalid_argument("ProbabilityVector: all entries zero");
  if (normalized && std::abs(sum() - 1.0) > 1e-12) {
    throw std::invalid_argument("ProbabilityVector: marked normalized but sum != 1");
  }
}

void ProductDistribution::validate() const {
  row.validate();
  col.validate();
}

ProbabilityVector power_law(int n, double exponent) {
  if (n < 1) throw std::invalid_argument("power_law: n must be >= 1");
  if (!(exponent > 0.0)) throw std::invalid_argument("power_law: exponent must be positive");
  ProbabilityVector p;
  p.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    p.weights[i] = std::pow(static_cast<double>(i + 1), -exponent);
  }
  return normalize(p);
}

ProbabilityVector uniform_vector(int n) {
  if (n < 1) throw std::invalid_argument("uniform_vector: n must be >= 1");
  ProbabilityVector p;
  p.weights.assign(n, 1.0 / n);
  p.normalized = true;
  return p;
}

ProbabilityVector normalize(const ProbabilityVector& p) {
  p.validate();
  if (p.normalized) return p;
  const double z = p.sum();
  if (!(z > 0.0) || !std::isfinite(z)) {
    throw std::invalid_argument("normalize: sum must be positive and finite");
  }
  ProbabilityVector out;
  out.weights.resize(p.weights.size());
  for (std::size_t i = 0; i < p.weights.size(); ++i) out.weights[i] = p.weights[i] / z;
  out.normalized = true;
  return out;
}

std::pair<int, double> min_component(const ProbabilityVector& p) {
  if (p.weights.empty()) throw std::invalid_argument("min_component: empty vector");
  int idx = 0;
  for (int i = 1; i < p.size(); ++i) {
    if (p.weights[i] < p.weights[idx]) idx = i;
  }
  return {idx, p.weights[idx]};
}

AlphaInterval alpha_range(const ProductDistribution& d) {
  d.validate();
  if (!d.normalized()) throw std::invalid_argument("alpha_range: factors must be normalized");
  const double mr = min_component(d.row).second;
  const double mc = min_component(d.col).second;
  return AlphaInterval{1.0 / std::max(mr, mc)};
}

}  // namespace wmc
