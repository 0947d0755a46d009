#include "wmc/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "wmc/estimation.hpp"
#include "wmc/linalg.hpp"
#include "wmc/rng.hpp"

namespace wmc {

namespace {

// Child stream tags for the per-trial generator.
constexpr std::uint64_t kMatrixStream = 0;
constexpr std::uint64_t kStageOneStream = 1;
constexpr std::uint64_t kStageTwoStream = 2;

std::string join_ints(const std::vector<int>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << v[i];
  return os.str();
}

std::string join_doubles(const std::vector<double>& v) {
  std::ostringstream os;
  char buf[40];
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.10g", v[i]);
    os << (i ? " " : "") << buf;
  }
  return os.str();
}

std::string join_schemes(const std::vector<WeightScheme>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << to_string(v[i]);
  return os.str();
}

}  // namespace

const char* to_string(SamplingMode mode) {
  return mode == SamplingMode::with_replacement ? "with_replacement" : "two_stage";
}

std::optional<SamplingMode> parse_mode(std::string_view name) {
  if (name == "with_replacement") return SamplingMode::with_replacement;
  if (name == "two_stage") return SamplingMode::two_stage;
  return std::nullopt;
}

void ExperimentConfig::validate() const {
  if (n < 2) throw std::invalid_argument("config: n must be >= 2");
  if (ranks.empty()) throw std::invalid_argument("config: ranks must be nonempty");
  for (int r : ranks) {
    if (r < 1 || r > n) throw std::invalid_argument("config: ranks must lie in [1, n]");
  }
  if (rates.empty()) throw std::invalid_argument("config: rates must be nonempty");
  for (std::size_t i = 0; i < rates.size(); ++i) {
    if (!(rates[i] >= 0.0) || !std::isfinite(rates[i])) {
      throw std::invalid_argument("config: rates must be finite and >= 0");
    }
    if (i > 0 && rates[i] <= rates[i - 1]) {
      throw std::invalid_argument("config: rates must be sorted strictly ascending");
    }
  }
  if (schemes.empty()) throw std::invalid_argument("config: schemes must be nonempty");
  if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
  if (!(exponent > 0.0)) throw std::invalid_argument("config: exponent must be > 0");
  if (stage_one_m < 0) throw std::invalid_argument("config: stage_one_m must be >= 0");
  solver.validate();
}

ExperimentConfig desk_preset() {
  ExperimentConfig cfg;
  cfg.n = 100;
  cfg.ranks = {3, 5, 8};
  // Draw multipliers m = rate * n^2, chosen so every rank/scheme pair sweeps
  // recovery probability from 0 to 1 inside the grid.
  cfg.rates = {2, 5, 8, 12, 18, 26, 36};
  cfg.schemes = {WeightScheme::uniform, WeightScheme::true_sqrt, WeightScheme::empirical_sqrt,
                 WeightScheme::smoothed, WeightScheme::theorem3};
  cfg.trials = 50;
  cfg.exponent = 1.2;
  cfg.mode = SamplingMode::with_replacement;
  cfg.seed = 0;
  return cfg;
}

ExperimentConfig paper_preset() {
  ExperimentConfig cfg;
  cfg.n = 500;
  cfg.ranks = {5, 10, 15, 20, 25};
  // Long-running manual job; the log-spaced grid brackets the transition for
  // every rank at this size without committing to a particular axis scaling.
  cfg.rates = {1, 2, 4, 8, 16, 32};
  cfg.schemes = {WeightScheme::uniform, WeightScheme::true_sqrt, WeightScheme::empirical_sqrt,
                 WeightScheme::smoothed};
  cfg.trials = 100;
  cfg.exponent = 1.2;
  cfg.mode = SamplingMode::with_replacement;
  cfg.seed = 0;
  return cfg;
}

std::optional<ExperimentConfig> preset_by_name(std::string_view name) {
  if (name == "desk") return desk_preset();
  if (name == "paper") return paper_preset();
  return std::nullopt;
}

ExperimentConfig config_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("bad JSON in " + path + ": " + e.what());
  }
  if (!j.is_object()) throw std::runtime_error("config must be a JSON object: " + path);

  static const std::set<std::string> known = {"n",       "ranks",    "rates", "schemes",
                                              "trials",  "exponent", "mode",  "seed",
                                              "stage_one_m", "solver"};
  static const std::set<std::string> known_solver = {"tol_feasibility", "max_iters", "mu_init",
                                                     "rho", "mu_max", "recovery_tol"};
  for (const auto& [key, _] : j.items()) {
    if (!known.count(key)) throw std::runtime_error("config: unknown key '" + key + "'");
  }

  ExperimentConfig cfg;
  cfg.ranks.clear();
  cfg.rates.clear();
  cfg.schemes.clear();
  if (j.contains("n")) cfg.n = j.at("n").get<int>();
  if (j.contains("ranks")) cfg.ranks = j.at("ranks").get<std::vector<int>>();
  if (j.contains("rates")) cfg.rates = j.at("rates").get<std::vector<double>>();
  if (j.contains("schemes")) {
    for (const auto& s : j.at("schemes")) {
      const auto scheme = parse_scheme(s.get<std::string>());
      if (!scheme) throw std::runtime_error("config: unknown scheme '" + s.get<std::string>() + "'");
      cfg.schemes.push_back(*scheme);
    }
  }
  if (j.contains("trials")) cfg.trials = j.at("trials").get<int>();
  if (j.contains("exponent")) cfg.exponent = j.at("exponent").get<double>();
  if (j.contains("mode")) {
    const auto mode = parse_mode(j.at("mode").get<std::string>());
    if (!mode) throw std::runtime_error("config: unknown mode '" + j.at("mode").get<std::string>() + "'");
    cfg.mode = *mode;
  }
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("stage_one_m")) cfg.stage_one_m = j.at("stage_one_m").get<std::int64_t>();
  if (j.contains("solver")) {
    const auto& js = j.at("solver");
    if (!js.is_object()) throw std::runtime_error("config: solver must be an object");
    for (const auto& [key, _] : js.items()) {
      if (!known_solver.count(key)) {
        throw std::runtime_error("config: unknown solver key '" + key + "'");
      }
    }
    if (js.contains("tol_feasibility")) cfg.solver.tol_feasibility = js.at("tol_feasibility").get<double>();
    if (js.contains("max_iters")) cfg.solver.max_iters = js.at("max_iters").get<int>();
    if (js.contains("mu_init")) cfg.solver.mu_init = js.at("mu_init").get<double>();
    if (js.contains("rho")) cfg.solver.rho = js.at("rho").get<double>();
    if (js.contains("mu_max")) cfg.solver.mu_max = js.at("mu_max").get<double>();
    if (js.contains("recovery_tol")) cfg.solver.recovery_tol = js.at("recovery_tol").get<double>();
  }
  cfg.validate();
  return cfg;
}

std::uint64_t trial_seed_for(const ExperimentConfig& cfg, int rank_index, int rate_index,
                             int trial) {
  return Rng(cfg.seed)
      .derive(static_cast<std::uint64_t>(rank_index))
      .derive(static_cast<std::uint64_t>(rate_index))
      .derive(static_cast<std::uint64_t>(trial))
      .seed();
}

TrialInstance make_trial_instance(const ExperimentConfig& cfg, int rank, double rate,
                                  std::uint64_t trial_seed) {
  TrialInstance inst;
  inst.rank = rank;

  ProductDistribution dist;
  dist.row = power_law(cfg.n, cfg.exponent);
  dist.col = power_law(cfg.n, cfg.exponent);
  inst.dist = dist;

  const Rng trial_rng(trial_seed);
  inst.m = random_low_rank(cfg.n, rank, trial_rng.derive(kMatrixStream).seed());

  if (cfg.mode == SamplingMode::with_replacement) {
    const std::int64_t draws =
        std::llround(rate * static_cast<double>(cfg.n) * static_cast<double>(cfg.n));
    Rng stage_one = trial_rng.derive(kStageOneStream);
    const std::vector<IndexPair> pairs = draw_pairs(dist, draws, stage_one);
    inst.est = empirical_from_pairs(pairs, cfg.n, cfg.n);
    inst.obs = observe_pairs(inst.m, pairs);
  } else {
    const std::int64_t m1 =
        cfg.stage_one_m > 0 ? cfg.stage_one_m
                            : static_cast<std::int64_t>(cfg.n) * static_cast<std::int64_t>(cfg.n);
    inst.est = stage_one_sample(dist, m1, trial_rng.derive(kStageOneStream).seed());
    inst.obs = stage_two_sample(inst.m, dist, rate, trial_rng.derive(kStageTwoStream).seed());
  }
  return inst;
}

TrialOutcome run_scheme_on_instance(const ExperimentConfig& cfg, const TrialInstance& instance,
                                    WeightScheme scheme) {
  TrialOutcome outcome;
  try {
    if (instance.obs.empty()) throw std::runtime_error("empty observation set");

    WeightPair w;
    switch (scheme) {
      case WeightScheme::uniform:
        w = weights_uniform(cfg.n, cfg.n);
        break;
      case WeightScheme::true_sqrt:
        w = weights_true_sqrt(instance.dist);
        break;
      case WeightScheme::empirical_sqrt:
        w = weights_empirical_sqrt(instance.est);
        break;
      case WeightScheme::smoothed:
        w = weights_smoothed(instance.est);
        break;
      case WeightScheme::theorem3: {
        const double mu0 = leverage_scores(instance.m).coherence();
        w = weights_theorem3(instance.est, mu0, instance.rank).first;
        break;
      }
    }

    const SolveResult result = solve_weighted(instance.obs, w, cfg.solver);
    outcome.iterations = result.iterations;
    outcome.solver_converged = result.converged;
    outcome.residual = (instance.m - result.matrix).norm();
    outcome.recovered = result.converged && outcome.residual <= cfg.solver.recovery_tol;
  } catch (const std::exception& e) {
    outcome.error = e.what();
    outcome.recovered = false;
    outcome.residual = instance.m.norm();  // distance from the zero completion
    outcome.iterations = 0;
    outcome.solver_converged = false;
  }
  return outcome;
}

TrialOutcome run_trial(const ExperimentConfig& cfg, int rank, double rate, WeightScheme scheme,
                       std::uint64_t trial_seed) {
  cfg.validate();
  return run_scheme_on_instance(cfg, make_trial_instance(cfg, rank, rate, trial_seed), scheme);
}

PhaseGrid run_grid(const ExperimentConfig& cfg, int jobs, std::ostream* progress) {
  cfg.validate();
  const int n_ranks = static_cast<int>(cfg.ranks.size());
  const int n_rates = static_cast<int>(cfg.rates.size());
  const int n_schemes = static_cast<int>(cfg.schemes.size());
  const std::size_t n_tasks =
      static_cast<std::size_t>(n_ranks) * n_rates * static_cast<std::size_t>(cfg.trials);

  if (jobs <= 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    jobs = hw > 0 ? static_cast<int>(hw) : 1;
  }
  jobs = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(jobs), n_tasks));

  // One slot per (rank, rate, trial); each holds every scheme's outcome.
  std::vector<std::vector<TrialOutcome>> results(n_tasks);
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex progress_mu;

  auto worker = [&]() {
    for (;;) {
      const std::size_t task = next.fetch_add(1);
      if (task >= n_tasks) return;
      const int trial = static_cast<int>(task % cfg.trials);
      const std::size_t cell = task / cfg.trials;
      const int rate_index = static_cast<int>(cell % n_rates);
      const int rank_index = static_cast<int>(cell / n_rates);

      std::vector<TrialOutcome> outcomes(n_schemes);
      try {
        const TrialInstance instance =
            make_trial_instance(cfg, cfg.ranks[rank_index], cfg.rates[rate_index],
                                trial_seed_for(cfg, rank_index, rate_index, trial));
        for (int s = 0; s < n_schemes; ++s) {
          outcomes[s] = run_scheme_on_instance(cfg, instance, cfg.schemes[s]);
        }
      } catch (const std::exception& e) {
        for (int s = 0; s < n_schemes; ++s) {
          outcomes[s].error = e.what();
          outcomes[s].recovered = false;
          outcomes[s].residual = std::numeric_limits<double>::quiet_NaN();
        }
      }
      results[task] = std::move(outcomes);

      const std::size_t finished = done.fetch_add(1) + 1;
      if (progress) {
        std::lock_guard<std::mutex> lock(progress_mu);
        *progress << '\r' << finished << '/' << n_tasks << std::flush;
      }
    }
  };

  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (progress) *progress << '\n';

  PhaseGrid grid;
  grid.cells.reserve(static_cast<std::size_t>(n_ranks) * n_rates * n_schemes);
  for (int a = 0; a < n_ranks; ++a) {
    for (int b = 0; b < n_rates; ++b) {
      for (int s = 0; s < n_schemes; ++s) {
        PhaseCell cell;
        cell.rank = cfg.ranks[a];
        cell.rate = cfg.rates[b];
        cell.scheme = cfg.schemes[s];
        cell.trials = cfg.trials;
        long double res_acc = 0.0L, iter_acc = 0.0L;
        for (int t = 0; t < cfg.trials; ++t) {
          const std::size_t task =
              (static_cast<std::size_t>(a) * n_rates + b) * cfg.trials + t;
          const TrialOutcome& o = results[task][s];
          if (o.recovered) ++cell.successes;
          res_acc += std::isfinite(o.residual) ? o.residual : 1.0;
          iter_acc += o.iterations;
        }
        cell.mean_residual = static_cast<double>(res_acc / cfg.trials);
        cell.mean_iters = static_cast<double>(iter_acc / cfg.trials);
        grid.cells.push_back(cell);
      }
    }
  }
  std::sort(grid.cells.begin(), grid.cells.end(), [](const PhaseCell& x, const PhaseCell& y) {
    if (x.rank != y.rank) return x.rank < y.rank;
    if (x.rate != y.rate) return x.rate < y.rate;
    return std::string_view(to_string(x.scheme)) < std::string_view(to_string(y.scheme));
  });
  return grid;
}

void emit_csv(const PhaseGrid& grid, const std::string& path) {
  if (grid.cells.empty()) throw std::invalid_argument("emit_csv: empty grid");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "rank,rate,scheme,trials,successes,probability,mean_residual,mean_iters\n";
  char buf[192];
  for (const PhaseCell& c : grid.cells) {
    std::snprintf(buf, sizeof(buf), "%d,%.10g,%s,%d,%d,%.6f,%.9e,%.4f\n", c.rank, c.rate,
                  to_string(c.scheme), c.trials, c.successes, c.probability(), c.mean_residual,
                  c.mean_iters);
    out << buf;
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

PhaseGrid read_grid_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::string line;
  if (!std::getline(in, line) ||
      line != "rank,rate,scheme,trials,successes,probability,mean_residual,mean_iters") {
    throw std::runtime_error("bad grid CSV header in " + path);
  }
  PhaseGrid grid;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    PhaseCell c;
    char scheme_buf[32] = {0};
    double probability = 0.0;
    if (std::sscanf(line.c_str(), "%d,%lf,%31[^,],%d,%d,%lf,%lf,%lf", &c.rank, &c.rate,
                    scheme_buf, &c.trials, &c.successes, &probability, &c.mean_residual,
                    &c.mean_iters) != 8) {
      throw std::runtime_error("bad grid CSV row in " + path + ": " + line);
    }
    const auto scheme = parse_scheme(scheme_buf);
    if (!scheme) throw std::runtime_error("bad scheme in grid CSV: " + std::string(scheme_buf));
    c.scheme = *scheme;
    grid.cells.push_back(c);
  }
  return grid;
}

std::vector<std::string> emit_plot_data(const PhaseGrid& grid, const std::string& dir) {
  if (grid.cells.empty()) throw std::invalid_argument("emit_plot_data: empty grid");
  std::filesystem::create_directories(dir);

  // (rank, scheme) -> rows sorted by rate; grid cells are already sorted.
  std::vector<std::string> paths;
  std::ofstream out;
  int open_rank = -1;
  WeightScheme open_scheme = WeightScheme::uniform;
  char buf[96];

  std::vector<PhaseCell> cells = grid.cells;
  std::sort(cells.begin(), cells.end(), [](const PhaseCell& x, const PhaseCell& y) {
    if (x.rank != y.rank) return x.rank < y.rank;
    const std::string_view sx = to_string(x.scheme), sy = to_string(y.scheme);
    if (sx != sy) return sx < sy;
    return x.rate < y.rate;
  });
  for (const PhaseCell& c : cells) {
    if (!out.is_open() || c.rank != open_rank || c.scheme != open_scheme) {
      if (out.is_open()) out.close();
      std::snprintf(buf, sizeof(buf), "series_r%d_%s.dat", c.rank, to_string(c.scheme));
      const std::string path = (std::filesystem::path(dir) / buf).string();
      out.open(path);
      if (!out) throw std::runtime_error("cannot open for writing: " + path);
      paths.push_back(path);
      open_rank = c.rank;
      open_scheme = c.scheme;
    }
    std::snprintf(buf, sizeof(buf), "%.10g %.6f\n", c.rate, c.probability());
    out << buf;
  }
  if (out.is_open()) out.close();
  return paths;
}

void write_unique_fraction(const std::vector<std::pair<std::int64_t, double>>& curve,
                           const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  char buf[64];
  for (const auto& [m, fraction] : curve) {
    std::snprintf(buf, sizeof(buf), "%lld %.6f\n", static_cast<long long>(m), fraction);
    out << buf;
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_run_meta(const ExperimentConfig& cfg, int jobs, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "version = " << kVersion << '\n'
      << "n = " << cfg.n << '\n'
      << "ranks = " << join_ints(cfg.ranks) << '\n'
      << "rates = " << join_doubles(cfg.rates) << '\n'
      << "schemes = " << join_schemes(cfg.schemes) << '\n'
      << "trials = " << cfg.trials << '\n'
      << "exponent = " << cfg.exponent << '\n'
      << "mode = " << to_string(cfg.mode) << '\n'
      << "seed = " << cfg.seed << '\n'
      << "stage_one_m = " << cfg.stage_one_m << '\n'
      << "solver.tol_feasibility = " << cfg.solver.tol_feasibility << '\n'
      << "solver.max_iters = " << cfg.solver.max_iters << '\n'
      << "solver.mu_init = " << cfg.solver.mu_init << '\n'
      << "solver.rho = " << cfg.solver.rho << '\n'
      << "solver.mu_max = " << cfg.solver.mu_max << '\n'
      << "solver.recovery_tol = " << cfg.solver.recovery_tol << '\n'
      << "jobs = " << jobs << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace wmc
