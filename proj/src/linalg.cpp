#include "wmc/linalg.hpp"

#include <lapacke.h>

#include <cmath>
#include <string>

#include "wmc/rng.hpp"

namespace wmc {

namespace {

constexpr double kRankRelTol = 1e-9;

void require_finite(const Matrix& a, const char* who) {
  if (!a.allFinite()) {
    throw std::invalid_argument(std::string(who) + ": input has non-finite entries");
  }
  if (a.rows() == 0 || a.cols() == 0) {
    throw std::invalid_argument(std::string(who) + ": input is empty");
  }
}

}  // namespace

int SvdResult::rank() const {
  if (sigma.size() == 0 || sigma(0) <= 0.0) return 0;
  const double cut = kRankRelTol * sigma(0);
  int k = 0;
  while (k < sigma.size() && sigma(k) > cut) ++k;
  return k;
}

double LeverageScores::coherence() const {
  return std::max(row_scores.maxCoeff(), col_scores.maxCoeff());
}

SvdResult svd(const Matrix& a) {
  require_finite(a, "svd");
  const lapack_int m = static_cast<lapack_int>(a.rows());
  const lapack_int n = static_cast<lapack_int>(a.cols());
  const lapack_int k = std::min(m, n);

  Matrix work = a;  // dgesdd destroys its input
  SvdResult out;
  out.u.resize(m, k);
  out.sigma.resize(k);
  Matrix vt(k, n);

  lapack_int info = LAPACKE_dgesdd(LAPACK_COL_MAJOR, 'S', m, n, work.data(), m,
                                   out.sigma.data(), out.u.data(), m, vt.data(), k);
  if (info != 0) {
    // The divide-and-conquer driver can fail to converge on rare inputs;
    // retry with the slower QR-iteration driver before giving up.
    work = a;
    Vector superb(std::max<lapack_int>(1, k - 1));
    info = LAPACKE_dgesvd(LAPACK_COL_MAJOR, 'S', 'S', m, n, work.data(), m,
                          out.sigma.data(), out.u.data(), m, vt.data(), k,
                          superb.data());
    if (info != 0) {
      throw SvdError("svd: backend failed to converge, status " + std::to_string(info));
    }
  }
  out.v = vt.transpose();
  return out;
}

Vector singular_values(const Matrix& a) {
  require_finite(a, "singular_values");
  const lapack_int m = static_cast<lapack_int>(a.rows());
  const lapack_int n = static_cast<lapack_int>(a.cols());
  const lapack_int k = std::min(m, n);

  Matrix work = a;
  Vector sigma(k);
  lapack_int info = LAPACKE_dgesdd(LAPACK_COL_MAJOR, 'N', m, n, work.data(), m,
                                   sigma.data(), nullptr, m, nullptr, k);
  if (info != 0) {
    work = a;
    Vector superb(std::max<lapack_int>(1, k - 1));
    info = LAPACKE_dgesvd(LAPACK_COL_MAJOR, 'N', 'N', m, n, work.data(), m,
                          sigma.data(), nullptr, m, nullptr, k, superb.data());
    if (info != 0) {
      throw SvdError("singular_values: backend failed to converge, status " +
                     std::to_string(info));
    }
  }
  return sigma;
}

double nuclear_norm(const Matrix& a) {
  const Vector sigma = singular_values(a);
  long double s = 0.0L;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) s += sigma(i);
  return static_cast<double>(s);
}

Matrix svt(const Matrix& a, double tau) {
  if (!(tau >= 0.0)) throw std::invalid_argument("svt: tau must be nonnegative");
  const SvdResult f = svd(a);
  int kept = 0;
  while (kept < f.sigma.size() && f.sigma(kept) > tau) ++kept;
  if (kept == 0) return Matrix::Zero(a.rows(), a.cols());
  const Vector shrunk = f.sigma.head(kept).array() - tau;
  return f.u.leftCols(kept) * shrunk.asDiagonal() * f.v.leftCols(kept).transpose();
}

LeverageScores leverage_scores(const Matrix& a) {
  const SvdResult f = svd(a);
  const int k = f.rank();
  if (k == 0) throw std::invalid_argument("leverage_scores: matrix is zero");

  LeverageScores out;
  out.rank = k;
  const double n1 = static_cast<double>(a.rows());
  const double n2 = static_cast<double>(a.cols());
  out.row_scores = (n1 / k) * f.u.leftCols(k).rowwise().squaredNorm();
  out.col_scores = (n2 / k) * f.v.leftCols(k).rowwise().squaredNorm();
  return out;
}

Matrix random_low_rank(int n, int r, std::uint64_t seed) {
  if (n < 1 || r < 1 || r > n) {
    throw std::invalid_argument("random_low_rank: need 1 <= r <= n");
  }
  Rng rng(seed);
  Matrix g1(n, r), g2(n, r);
  for (int j = 0; j < r; ++j)
    for (int i = 0; i < n; ++i) g1(i, j) = rng.normal();
  for (int j = 0; j < r; ++j)
    for (int i = 0; i < n; ++i) g2(i, j) = rng.normal();
  Matrix m = g1 * g2.transpose();
  m /= m.norm();
  return m;
}

}  // namespace wmc
