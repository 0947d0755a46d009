#include "wmc/estimation.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace wmc {

namespace {

double validated_min_p(const ProductDistribution& d, double alpha, double epsilon) {
  if (!d.normalized()) throw std::invalid_argument("sample_size: d must be normalized");
  const AlphaInterval valid = alpha_range(d);
  if (!valid.contains(alpha)) {
    std::ostringstream msg;
    msg << "sample_size: alpha must lie in (0, " << valid.upper << "), got " << alpha;
    throw std::invalid_argument(msg.str());
  }
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw std::invalid_argument("sample_size: epsilon must lie in (0, 1)");
  }
  return std::min(min_component(d.row).second, min_component(d.col).second);
}

BoundPlan make_plan(const ProductDistribution& d, double alpha, double epsilon, Sided sided) {
  const double min_p = validated_min_p(d, alpha, epsilon);
  const double n_total = static_cast<double>(d.row.size() + d.col.size());
  const double log_arg = (sided == Sided::two_sided ? 2.0 : 1.0) * n_total / epsilon;
  const double t = alpha * min_p;
  const double raw = 0.5 / (t * t) * std::log(log_arg);
  if (!(raw < 9.0e18)) throw std::overflow_error("sample_size: required m overflows");

  BoundPlan plan;
  plan.alpha = alpha;
  plan.epsilon = epsilon;
  plan.sided = sided;
  plan.raw = raw;
  plan.m_required = static_cast<std::int64_t>(std::ceil(raw));
  if (plan.m_required < 1) plan.m_required = 1;
  return plan;
}

void require_shapes(const ProductDistribution& d, const EmpiricalEstimate& est) {
  if (d.row.size() != static_cast<int>(est.row_counts.size()) ||
      d.col.size() != static_cast<int>(est.col_counts.size())) {
    throw std::invalid_argument("check: dimension mismatch between d and estimate");
  }
}

bool product_lower_holds(const ProbabilityVector& pr, const ProbabilityVector& pc,
                         const ProbabilityVector& hr, const ProbabilityVector& hc,
                         double scale) {
  // p_ij * scale >= hat_ij for all pairs, scale = (1+alpha)^2.
  for (int i = 0; i < pr.size(); ++i) {
    const double lhs_row = pr.weights[i] * scale;
    for (int j = 0; j < pc.size(); ++j) {
      if (lhs_row * pc.weights[j] < hr.weights[i] * hc.weights[j]) return false;
    }
  }
  return true;
}

bool product_upper_holds(const ProbabilityVector& pr, const ProbabilityVector& pc,
                         const ProbabilityVector& hr, const ProbabilityVector& hc,
                         double scale) {
  // p_ij * scale <= hat_ij for all pairs, scale = (1-alpha)^2.
  for (int i = 0; i < pr.size(); ++i) {
    const double lhs_row = pr.weights[i] * scale;
    for (int j = 0; j < pc.size(); ++j) {
      if (lhs_row * pc.weights[j] > hr.weights[i] * hc.weights[j]) return false;
    }
  }
  return true;
}

bool factor_wise(const ProbabilityVector& p, const ProbabilityVector& h, double lo, double hi) {
  // h_i within [lo * p_i, hi * p_i] for all i; hi or lo may be disabled via 0 / inf.
  for (int i = 0; i < p.size(); ++i) {
    if (h.weights[i] < lo * p.weights[i]) return false;
    if (h.weights[i] > hi * p.weights[i]) return false;
  }
  return true;
}

}  // namespace

BoundPlan sample_size_one_sided(const ProductDistribution& d, double alpha, double epsilon) {
  return make_plan(d, alpha, epsilon, Sided::one_sided);
}

BoundPlan sample_size_two_sided(const ProductDistribution& d, double alpha, double epsilon) {
  return make_plan(d, alpha, epsilon, Sided::two_sided);
}

bool check_one_sided(const ProductDistribution& d, const EmpiricalEstimate& est, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("check_one_sided: alpha must be > 0");
  require_shapes(d, est);
  const ProbabilityVector hr = est.row_hat();
  const ProbabilityVector hc = est.col_hat();
  const double one_plus = 1.0 + alpha;
  if (factor_wise(d.row, hr, 0.0, one_plus) && factor_wise(d.col, hc, 0.0, one_plus)) {
    return true;
  }
  return product_lower_holds(d.row, d.col, hr, hc, one_plus * one_plus);
}

bool check_two_sided(const ProductDistribution& d, const EmpiricalEstimate& est, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("check_two_sided: alpha must lie in (0, 1)");
  }
  require_shapes(d, est);
  const ProbabilityVector hr = est.row_hat();
  const ProbabilityVector hc = est.col_hat();
  const double one_plus = 1.0 + alpha;
  const double one_minus = 1.0 - alpha;
  if (factor_wise(d.row, hr, one_minus, one_plus) &&
      factor_wise(d.col, hc, one_minus, one_plus)) {
    return true;
  }
  return product_lower_holds(d.row, d.col, hr, hc, one_plus * one_plus) &&
         product_upper_holds(d.row, d.col, hr, hc, one_minus * one_minus);
}

ProductDistribution normalized_target(const ProductDistribution& rates) {
  rates.validate();
  if (rates.normalized()) return rates;
  ProductDistribution out;
  out.row = normalize(rates.row);
  out.col = normalize(rates.col);
  return out;
}

double coverage_frequency(const ProductDistribution& d, const BoundPlan& plan, int runs,
                          std::uint64_t seed) {
  if (runs < 1) throw std::invalid_argument("coverage_frequency: runs must be >= 1");
  const Rng master(seed);
  int hits = 0;
  for (int k = 0; k < runs; ++k) {
    const EmpiricalEstimate est =
        stage_one_sample(d, plan.m_required, master.derive(static_cast<std::uint64_t>(k)).seed());
    const bool ok = plan.sided == Sided::one_sided ? check_one_sided(d, est, plan.alpha)
                                                   : check_two_sided(d, est, plan.alpha);
    if (ok) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(runs);
}

}  // namespace wmc
