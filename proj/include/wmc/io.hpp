#pragma once

#include <string>
#include <vector>

#include "wmc/distribution.hpp"
#include "wmc/linalg.hpp"
#include "wmc/sampling.hpp"
#include "wmc/weights.hpp"

namespace wmc {

// Observation CSV: header `i,j,value`, 0-based indices, one row each.
void write_observations_csv(const ObservationSet& obs, const std::string& path);
ObservationSet read_observations_csv(const std::string& path, int rows = 0, int cols = 0);

void write_matrix_csv(const Matrix& m, const std::string& path);
Matrix read_matrix_csv(const std::string& path);

// Whitespace-separated reals, one vector per line.
std::vector<std::vector<double>> read_vector_lines(const std::string& path);

// Two lines: row factor then column factor.
ProductDistribution read_factors(const std::string& path);

// Two lines: row weights then column weights.
WeightPair read_weights(const std::string& path);
void write_weights(const WeightPair& w, const std::string& path);

}  // namespace wmc
