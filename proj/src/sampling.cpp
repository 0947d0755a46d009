#include "wmc/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wmc {

ProbabilityVector EmpiricalEstimate::row_hat() const {
  if (m < 1) throw std::invalid_argument("EmpiricalEstimate: m must be >= 1");
  ProbabilityVector p;
  p.weights.resize(row_counts.size());
  for (std::size_t i = 0; i < row_counts.size(); ++i) {
    p.weights[i] = static_cast<double>(row_counts[i]) / static_cast<double>(m);
  }
  p.normalized = true;
  return p;
}

ProbabilityVector EmpiricalEstimate::col_hat() const {
  if (m < 1) throw std::invalid_argument("EmpiricalEstimate: m must be >= 1");
  ProbabilityVector p;
  p.weights.resize(col_counts.size());
  for (std::size_t j = 0; j < col_counts.size(); ++j) {
    p.weights[j] = static_cast<double>(col_counts[j]) / static_cast<double>(m);
  }
  p.normalized = true;
  return p;
}

double EmpiricalEstimate::hat(int i, int j) const {
  const double md = static_cast<double>(m);
  return (static_cast<double>(row_counts.at(i)) / md) *
         (static_cast<double>(col_counts.at(j)) / md);
}

void ObservationSet::validate() const {
  if (rows < 1 || cols < 1) throw std::invalid_argument("ObservationSet: bad shape");
  const Observation* prev = nullptr;
  for (const Observation& o : entries) {
    if (o.i < 0 || o.i >= rows || o.j < 0 || o.j >= cols) {
      throw std::invalid_argument("ObservationSet: index out of range");
    }
    if (!std::isfinite(o.value)) {
      throw std::invalid_argument("ObservationSet: non-finite value");
    }
    if (prev && (o.i < prev->i || (o.i == prev->i && o.j <= prev->j))) {
      throw std::invalid_argument("ObservationSet: entries must be sorted and unique");
    }
    prev = &o;
  }
}

CumulativeTable::CumulativeTable(const std::vector<double>& weights) {
  if (weights.empty()) throw std::invalid_argument("CumulativeTable: empty weights");
  cdf_.resize(weights.size());
  long double acc = 0.0L;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double w = weights[i];
    if (!std::isfinite(w) || w < 0.0) {
      throw std::invalid_argument("CumulativeTable: weights must be finite and >= 0");
    }
    if (w > 0.0) last_positive_ = static_cast<int>(i);
    acc += w;
    cdf_[i] = static_cast<double>(acc);
  }
  if (!(cdf_.back() > 0.0)) throw std::invalid_argument("CumulativeTable: total weight zero");
}

int CumulativeTable::draw(Rng& rng) const {
  const double x = rng.uniform() * cdf_.back();
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), x);
  // x can round up to the total; fold that edge onto the last usable index.
  if (it == cdf_.end()) return last_positive_;
  return static_cast<int>(it - cdf_.begin());
}

std::vector<IndexPair> draw_pairs(const ProductDistribution& d, std::int64_t m, Rng& rng) {
  d.validate();
  if (m < 0) throw std::invalid_argument("draw_pairs: m must be >= 0");
  const CumulativeTable rows(d.row.weights);
  const CumulativeTable cols(d.col.weights);
  std::vector<IndexPair> pairs;
  pairs.reserve(static_cast<std::size_t>(m));
  for (std::int64_t s = 0; s < m; ++s) {
    const int i = rows.draw(rng);
    const int j = cols.draw(rng);
    pairs.push_back(IndexPair{i, j});
  }
  return pairs;
}

EmpiricalEstimate empirical_from_pairs(const std::vector<IndexPair>& pairs, int n1, int n2) {
  if (n1 < 1 || n2 < 1) throw std::invalid_argument("empirical_from_pairs: bad shape");
  EmpiricalEstimate est;
  est.row_counts.assign(n1, 0);
  est.col_counts.assign(n2, 0);
  est.m = static_cast<std::int64_t>(pairs.size());
  for (const IndexPair& p : pairs) {
    est.row_counts.at(p.i) += 1;
    est.col_counts.at(p.j) += 1;
  }
  return est;
}

EmpiricalEstimate stage_one_sample(const ProductDistribution& d, std::int64_t m,
                                   std::uint64_t seed) {
  if (m < 1) throw std::invalid_argument("stage_one_sample: m must be >= 1");
  if (!d.normalized()) throw std::invalid_argument("stage_one_sample: d must be normalized");
  Rng rng(seed);
  const std::vector<IndexPair> pairs = draw_pairs(d, m, rng);
  return empirical_from_pairs(pairs, d.row.size(), d.col.size());
}

ObservationSet stage_two_sample(const Matrix& m, const ProductDistribution& rates,
                                double multiplier, std::uint64_t seed) {
  rates.validate();
  if (!(multiplier > 0.0)) throw std::invalid_argument("stage_two_sample: multiplier must be > 0");
  if (m.rows() != rates.row.size() || m.cols() != rates.col.size()) {
    throw std::invalid_argument("stage_two_sample: shape mismatch");
  }
  Rng rng(seed);
  ObservationSet obs;
  obs.rows = static_cast<int>(m.rows());
  obs.cols = static_cast<int>(m.cols());
  for (int i = 0; i < obs.rows; ++i) {
    for (int j = 0; j < obs.cols; ++j) {
      const double p = std::min(1.0, multiplier * rates.value(i, j));
      if (rng.uniform() < p) obs.entries.push_back(Observation{i, j, m(i, j)});
    }
  }
  return obs;
}

ObservationSet observe_pairs(const Matrix& m, const std::vector<IndexPair>& pairs) {
  std::vector<IndexPair> sorted = pairs;
  std::sort(sorted.begin(), sorted.end(), [](const IndexPair& a, const IndexPair& b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });
  ObservationSet obs;
  obs.rows = static_cast<int>(m.rows());
  obs.cols = static_cast<int>(m.cols());
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    if (k > 0 && sorted[k].i == sorted[k - 1].i && sorted[k].j == sorted[k - 1].j) continue;
    const IndexPair& p = sorted[k];
    if (p.i < 0 || p.i >= obs.rows || p.j < 0 || p.j >= obs.cols) {
      throw std::invalid_argument("observe_pairs: index out of range");
    }
    obs.entries.push_back(Observation{p.i, p.j, m(p.i, p.j)});
  }
  return obs;
}

std::vector<std::pair<std::int64_t, double>> unique_fraction_curve(
    const ProductDistribution& d, const std::vector<std::int64_t>& m_grid,
    std::pair<int, int> shape, const std::vector<std::uint64_t>& seeds) {
  if (!d.normalized()) throw std::invalid_argument("unique_fraction_curve: d must be normalized");
  const int n1 = shape.first, n2 = shape.second;
  if (n1 < 1 || n2 < 1) throw std::invalid_argument("unique_fraction_curve: bad shape");
  if (d.row.size() != n1 || d.col.size() != n2) {
    throw std::invalid_argument("unique_fraction_curve: shape mismatch");
  }
  if (seeds.empty()) throw std::invalid_argument("unique_fraction_curve: need at least one seed");

  const CumulativeTable rows(d.row.weights);
  const CumulativeTable cols(d.col.weights);
  const double cells = static_cast<double>(n1) * static_cast<double>(n2);

  std::vector<std::pair<std::int64_t, double>> out;
  out.reserve(m_grid.size());
  std::vector<char> hit(static_cast<std::size_t>(n1) * n2);
  for (std::int64_t m : m_grid) {
    if (m < 0) throw std::invalid_argument("unique_fraction_curve: m must be >= 0");
    long double acc = 0.0L;
    for (std::uint64_t seed : seeds) {
      Rng rng(seed);
      std::fill(hit.begin(), hit.end(), 0);
      std::int64_t distinct = 0;
      for (std::int64_t s = 0; s < m; ++s) {
        const int i = rows.draw(rng);
        const int j = cols.draw(rng);
        char& cell = hit[static_cast<std::size_t>(i) * n2 + j];
        if (!cell) {
          cell = 1;
          ++distinct;
        }
      }
      acc += static_cast<double>(distinct) / cells;
    }
    out.emplace_back(m, static_cast<double>(acc / seeds.size()));
  }
  return out;
}

}  // namespace wmc
