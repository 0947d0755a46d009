#include "wmc/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace wmc {

void SolverConfig::validate() const {
  if (!(tol_feasibility > 0.0)) throw std::invalid_argument("SolverConfig: tol_feasibility must be > 0");
  if (max_iters < 1) throw std::invalid_argument("SolverConfig: max_iters must be >= 1");
  if (!(mu_init > 0.0)) throw std::invalid_argument("SolverConfig: mu_init must be > 0");
  if (!(rho > 1.0)) throw std::invalid_argument("SolverConfig: rho must be > 1");
  if (!(mu_max >= mu_init)) throw std::invalid_argument("SolverConfig: mu_max must be >= mu_init");
  if (!(recovery_tol > 0.0)) throw std::invalid_argument("SolverConfig: recovery_tol must be > 0");
}

SolveResult solve_unweighted(const ObservationSet& obs, const SolverConfig& cfg) {
  cfg.validate();
  obs.validate();
  if (obs.empty()) throw std::invalid_argument("solve_unweighted: empty observation set");

  const int n1 = obs.rows, n2 = obs.cols;
  Matrix d = Matrix::Zero(n1, n2);
  for (const Observation& o : obs.entries) d(o.i, o.j) = o.value;
  const double norm_obs = d.norm();

  SolveResult result;
  if (norm_obs == 0.0) {
    // All observed values zero: the zero matrix is feasible with zero norm.
    result.matrix = Matrix::Zero(n1, n2);
    result.converged = true;
    result.status = "converged";
    return result;
  }

  // min ||Z||_* subject to Z + E = D, E zero on the observed entries.
  // Per outer iteration:
  //   Z <- SVT_{1/mu}(D - E + Y/mu)
  //   E <- P_offsupport(D - Z + Y/mu)
  //   Y <- Y + mu (D - Z - E),  mu <- min(rho mu, cap)
  const double sigma1 = singular_values(d)(0);
  double mu = cfg.mu_init / sigma1;
  const double mu_cap = cfg.mu_max / sigma1;

  Matrix z = Matrix::Zero(n1, n2);
  Matrix z_prev = z;
  Matrix e = Matrix::Zero(n1, n2);
  Matrix y = Matrix::Zero(n1, n2);
  Matrix t(n1, n2);

  double rel_res = std::numeric_limits<double>::infinity();
  result.status = "max_iters";
  for (int it = 1; it <= cfg.max_iters; ++it) {
    result.iterations = it;
    const double inv_mu = 1.0 / mu;

    t = d - e + y * inv_mu;
    const SvdResult f = svd(t);
    int kept = 0;
    while (kept < f.sigma.size() && f.sigma(kept) > inv_mu) ++kept;
    if (kept == 0) {
      z.setZero();
      if (cfg.objective_trace) cfg.objective_trace->push_back(0.0);
    } else {
      const Vector shrunk = f.sigma.head(kept).array() - inv_mu;
      z.noalias() = f.u.leftCols(kept) * shrunk.asDiagonal() * f.v.leftCols(kept).transpose();
      if (cfg.objective_trace) cfg.objective_trace->push_back(shrunk.sum());
    }

    e = d - z + y * inv_mu;
    for (const Observation& o : obs.entries) e(o.i, o.j) = 0.0;

    long double res2 = 0.0L;
    for (const Observation& o : obs.entries) {
      const double r = d(o.i, o.j) - z(o.i, o.j);
      res2 += static_cast<long double>(r) * r;
    }
    rel_res = std::sqrt(static_cast<double>(res2)) / norm_obs;

    if (rel_res <= cfg.tol_feasibility) {
      result.converged = true;
      result.status = "converged";
      break;
    }
    if (it > 1) {
      // Relative to the observed data norm, like the feasibility residual,
      // so the rule is invariant under rescaling the observations.
      const double dz = (z - z_prev).norm() / norm_obs;
      if (dz < 0.1 * cfg.tol_feasibility) {
        result.status = "stalled";
        break;
      }
    }
    z_prev = z;

    y += mu * (d - z - e);
    mu = std::min(mu * cfg.rho, mu_cap);
  }

  result.matrix = std::move(z);
  result.final_residual = rel_res;
  return result;
}

SolveResult solve_weighted(const ObservationSet& obs, const WeightPair& w,
                           const SolverConfig& cfg) {
  w.validate();
  if (static_cast<int>(w.r_weights.size()) != obs.rows ||
      static_cast<int>(w.c_weights.size()) != obs.cols) {
    throw std::invalid_argument("solve_weighted: weight length mismatch");
  }

  ObservationSet scaled = obs;
  for (Observation& o : scaled.entries) o.value *= w.r_weights[o.i] * w.c_weights[o.j];

  SolveResult result = solve_unweighted(scaled, cfg);
  for (int j = 0; j < obs.cols; ++j) {
    for (int i = 0; i < obs.rows; ++i) {
      result.matrix(i, j) /= w.r_weights[i] * w.c_weights[j];
    }
  }
  return result;
}

bool recovery_check(const Matrix& m, const SolveResult& result, double tol) {
  if (m.rows() != result.matrix.rows() || m.cols() != result.matrix.cols()) {
    throw std::invalid_argument("recovery_check: shape mismatch");
  }
  if (!(tol > 0.0)) throw std::invalid_argument("recovery_check: tol must be > 0");
  return (m - result.matrix).norm() <= tol;
}

}  // namespace wmc
