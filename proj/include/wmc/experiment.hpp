#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wmc/distribution.hpp"
#include "wmc/sampling.hpp"
#include "wmc/solver.hpp"
#include "wmc/weights.hpp"

namespace wmc {

inline constexpr const char* kVersion = "0.1.0";

// with_replacement: a rate is m / n^2 draws per entry and the observed set
// is the distinct pairs among the draws; the empirical estimators come
// from the same draws. two_stage: a rate is the Bernoulli multiplier, the
// estimators come from an independent first stage of stage_one_m draws.
enum class SamplingMode { with_replacement, two_stage };

const char* to_string(SamplingMode mode);
std::optional<SamplingMode> parse_mode(std::string_view name);

struct ExperimentConfig {
  int n = 100;
  std::vector<int> ranks;
  std::vector<double> rates;  // sorted ascending
  std::vector<WeightScheme> schemes;
  int trials = 50;
  double exponent = 1.2;
  SamplingMode mode = SamplingMode::with_replacement;
  std::uint64_t seed = 0;
  std::int64_t stage_one_m = 0;  // two_stage only; 0 means n*n
  SolverConfig solver;

  void validate() const;
};

ExperimentConfig desk_preset();
ExperimentConfig paper_preset();  // full-scale configuration; hours of compute, never run in CI
std::optional<ExperimentConfig> preset_by_name(std::string_view name);

ExperimentConfig config_from_json_file(const std::string& path);

struct PhaseCell {
  int rank = 0;
  double rate = 0.0;
  WeightScheme scheme = WeightScheme::uniform;
  int trials = 0;
  int successes = 0;
  double mean_residual = 0.0;  // mean Frobenius distance to the planted matrix
  double mean_iters = 0.0;

  double probability() const {
    return trials > 0 ? static_cast<double>(successes) / trials : 0.0;
  }
};

// Cells sorted by (rank, rate, scheme label).
struct PhaseGrid {
  std::vector<PhaseCell> cells;
};

// Everything the schemes share within one (rank, rate, trial) cell: the
// planted matrix, the observed entries, and the stage-one estimators.
struct TrialInstance {
  int rank = 0;
  Matrix m;
  ObservationSet obs;
  EmpiricalEstimate est;
  ProductDistribution dist;
};

struct TrialOutcome {
  bool recovered = false;
  double residual = 0.0;  // Frobenius distance to the planted matrix
  int iterations = 0;
  bool solver_converged = false;
  std::string error;  // nonempty when the trial failed outright
};

std::uint64_t trial_seed_for(const ExperimentConfig& cfg, int rank_index, int rate_index,
                             int trial);

// Instance generation depends only on (cfg, rank, rate, trial_seed), never
// on the scheme, so every scheme sees the same matrix and observations.
TrialInstance make_trial_instance(const ExperimentConfig& cfg, int rank, double rate,
                                  std::uint64_t trial_seed);

TrialOutcome run_scheme_on_instance(const ExperimentConfig& cfg, const TrialInstance& instance,
                                    WeightScheme scheme);

TrialOutcome run_trial(const ExperimentConfig& cfg, int rank, double rate, WeightScheme scheme,
                       std::uint64_t trial_seed);

// jobs <= 0 picks the hardware thread count. Per-trial failures are
// recorded in the affected cells; the grid always completes.
PhaseGrid run_grid(const ExperimentConfig& cfg, int jobs = 1, std::ostream* progress = nullptr);

void emit_csv(const PhaseGrid& grid, const std::string& path);
PhaseGrid read_grid_csv(const std::string& path);

// One series file per (rank, scheme): `series_r<rank>_<scheme>.dat` with
// `rate probability` columns. Returns the paths written.
std::vector<std::string> emit_plot_data(const PhaseGrid& grid, const std::string& dir);

void write_unique_fraction(const std::vector<std::pair<std::int64_t, double>>& curve,
                           const std::string& path);

void write_run_meta(const ExperimentConfig& cfg, int jobs, const std::string& path);

}  // namespace wmc
