#pragma once

#include <cstdint>

#include "wmc/distribution.hpp"
#include "wmc/sampling.hpp"

namespace wmc {

enum class Sided { one_sided, two_sided };

struct BoundPlan {
  double alpha = 0.0;
  double epsilon = 0.0;
  std::int64_t m_required = 0;
  Sided sided = Sided::one_sided;
  double raw = 0.0;  // closed form before rounding up
};

// Hoeffding sample counts guaranteeing the multiplicative deviation
// bounds with probability at least 1 - epsilon. Natural logs.
BoundPlan sample_size_one_sided(const ProductDistribution& d, double alpha, double epsilon);
BoundPlan sample_size_two_sided(const ProductDistribution& d, double alpha, double epsilon);

// True iff p_ij >= hat_p_ij / (1+alpha)^2 for every pair. A factor-wise
// sufficient condition is used as a fast path; failures are decided by
// the full product-form scan.
bool check_one_sided(const ProductDistribution& d, const EmpiricalEstimate& est, double alpha);

// Adds the upper bound p_ij <= hat_p_ij / (1-alpha)^2; requires alpha < 1.
bool check_two_sided(const ProductDistribution& d, const EmpiricalEstimate& est, double alpha);

// Factor-normalized distribution; its product equals p / sum(p).
ProductDistribution normalized_target(const ProductDistribution& rates);

// Fraction of runs (fresh stage-one sample of plan.m_required draws each)
// on which the deviation check for plan.sided holds.
double coverage_frequency(const ProductDistribution& d, const BoundPlan& plan, int runs,
                          std::uint64_t seed);

}  // namespace wmc
