#pragma once

#include <limits>
#include <string>
#include <vector>

#include "wmc/linalg.hpp"
#include "wmc/sampling.hpp"
#include "wmc/weights.hpp"

namespace wmc {

struct SolverConfig {
  double tol_feasibility = 1e-7;  // relative residual on observed entries
  int max_iters = 500;
  double mu_init = 1.0;  // scaled by 1 / sigma_1 of the observed data
  double rho = 1.5;
  // Ceiling for the penalty, same 1/sigma_1 scaling as mu_init. With the
  // penalty held constant the iteration is plain two-block ADMM, whose
  // fixpoint is the minimum-norm completion; unbounded growth converges
  // faster but can stop at a feasible point that is not minimal.
  double mu_max = std::numeric_limits<double>::infinity();
  double recovery_tol = 1e-5;

  // When set, receives the nuclear norm of the iterate per outer iteration.
  std::vector<double>* objective_trace = nullptr;

  void validate() const;
};

struct SolveResult {
  Matrix matrix;
  int iterations = 0;
  double final_residual = 0.0;
  bool converged = false;
  std::string status;  // converged | stalled | max_iters
};

// Nuclear norm minimization subject to agreement with the observed
// entries, via inexact augmented Lagrangian iterations with a singular
// value thresholding primal step.
SolveResult solve_unweighted(const ObservationSet& obs, const SolverConfig& cfg);

// Weighted variant: scale observations by the weight diagonals, solve the
// unweighted problem, unscale. Identity weights reproduce solve_unweighted
// bit for bit.
SolveResult solve_weighted(const ObservationSet& obs, const WeightPair& w,
                           const SolverConfig& cfg);

// True iff the Frobenius distance to the reference matrix is within tol.
bool recovery_check(const Matrix& m, const SolveResult& result, double tol);

}  // namespace wmc
