#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>

namespace wmc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Thrown when the SVD backend reports failure; carries the backend status.
class SvdError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SvdResult {
  Matrix u;      // n1 x k, orthonormal columns
  Vector sigma;  // k, nonincreasing, nonnegative
  Matrix v;      // n2 x k, orthonormal columns

  int rank() const;  // count of sigma_i > 1e-9 * sigma_0
};

struct LeverageScores {
  Vector row_scores;  // length n1, sums to n1
  Vector col_scores;  // length n2, sums to n2
  int rank = 0;

  double coherence() const;  // max over both score vectors
};

// Thin SVD, A = U diag(sigma) V^T with k = min(n1, n2).
SvdResult svd(const Matrix& a);

// Singular values only (cheaper than a full decomposition).
Vector singular_values(const Matrix& a);

double nuclear_norm(const Matrix& a);

// Singular value thresholding: U diag(max(sigma - tau, 0)) V^T.
Matrix svt(const Matrix& a, double tau);

// Leverage scores of the rank-k row/column spaces, k the numerical rank.
LeverageScores leverage_scores(const Matrix& a);

// Product of two n x r standard Gaussian factors, scaled to unit
// Frobenius norm. Deterministic for a given seed.
Matrix random_low_rank(int n, int r, std::uint64_t seed);

}  // namespace wmc
