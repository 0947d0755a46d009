#include "wmc/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace wmc {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  return in;
}

}  // namespace

void write_observations_csv(const ObservationSet& obs, const std::string& path) {
  obs.validate();
  std::ofstream out = open_out(path);
  out << "i,j,value\n";
  char buf[64];
  for (const Observation& o : obs.entries) {
    std::snprintf(buf, sizeof(buf), "%d,%d,%.17g\n", o.i, o.j, o.value);
    out << buf;
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

ObservationSet read_observations_csv(const std::string& path, int rows, int cols) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("i,j,value", 0) != 0) {
    throw std::runtime_error("bad observation CSV header in " + path);
  }
  ObservationSet obs;
  int max_i = -1, max_j = -1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    Observation o;
    if (std::sscanf(line.c_str(), "%d,%d,%lf", &o.i, &o.j, &o.value) != 3) {
      throw std::runtime_error("bad observation row in " + path + ": " + line);
    }
    max_i = std::max(max_i, o.i);
    max_j = std::max(max_j, o.j);
    obs.entries.push_back(o);
  }
  obs.rows = rows > 0 ? rows : max_i + 1;
  obs.cols = cols > 0 ? cols : max_j + 1;
  std::sort(obs.entries.begin(), obs.entries.end(), [](const Observation& a, const Observation& b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });
  obs.validate();
  return obs;
}

void write_matrix_csv(const Matrix& m, const std::string& path) {
  std::ofstream out = open_out(path);
  char buf[48];
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
      out << buf << (j + 1 < m.cols() ? "," : "");
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

Matrix read_matrix_csv(const std::string& path) {
  std::ifstream in = open_in(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw std::runtime_error("ragged matrix CSV: " + path);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("empty matrix CSV: " + path);
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

std::vector<std::vector<double>> read_vector_lines(const std::string& path) {
  std::ifstream in = open_in(path);
  std::vector<std::vector<double>> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> v;
    std::stringstream ss(line);
    double x;
    while (ss >> x) v.push_back(x);
    lines.push_back(std::move(v));
  }
  return lines;
}

ProductDistribution read_factors(const std::string& path) {
  const auto lines = read_vector_lines(path);
  if (lines.size() != 2) {
    throw std::runtime_error("factor file must hold exactly two lines: " + path);
  }
  ProductDistribution d;
  d.row.weights = lines[0];
  d.col.weights = lines[1];
  const double tol = 1e-12;
  d.row.normalized = std::abs(stable_sum(d.row.weights) - 1.0) <= tol;
  d.col.normalized = std::abs(stable_sum(d.col.weights) - 1.0) <= tol;
  d.validate();
  return d;
}

WeightPair read_weights(const std::string& path) {
  const auto lines = read_vector_lines(path);
  if (lines.size() != 2) {
    throw std::runtime_error("weight file must hold exactly two lines: " + path);
  }
  WeightPair w;
  w.r_weights = lines[0];
  w.c_weights = lines[1];
  w.validate();
  return w;
}

void write_weights(const WeightPair& w, const std::string& path) {
  w.validate();
  std::ofstream out = open_out(path);
  char buf[48];
  for (std::size_t i = 0; i < w.r_weights.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", w.r_weights[i]);
    out << buf << (i + 1 < w.r_weights.size() ? " " : "");
  }
  out << '\n';
  for (std::size_t j = 0; j < w.c_weights.size(); ++j) {
    std::snprintf(buf, sizeof(buf), "%.17g", w.c_weights[j]);
    out << buf << (j + 1 < w.c_weights.size() ? " " : "");
  }
  out << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace wmc
