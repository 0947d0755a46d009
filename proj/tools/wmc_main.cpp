#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "wmc/estimation.hpp"
#include "wmc/experiment.hpp"
#include "wmc/io.hpp"
#include "wmc/rng.hpp"
#include "wmc/sampling.hpp"
#include "wmc/solver.hpp"
#include "wmc/weights.hpp"

namespace {

struct DistSpec {
  int n = 100;
  double exponent = 1.2;
  std::string kind = "powerlaw";  // powerlaw | uniform
  std::string factors_path;
};

void add_dist_flags(CLI::App* cmd, DistSpec* spec) {
  cmd->add_option("--n", spec->n, "square dimension for synthetic factors");
  cmd->add_option("--exponent", spec->exponent, "power-law exponent");
  cmd->add_option("--dist", spec->kind, "synthetic factor family: powerlaw | uniform")
      ->check(CLI::IsMember({"powerlaw", "uniform"}));
  cmd->add_option("--factors", spec->factors_path,
                  "factor file (two whitespace-separated lines: row, col)");
}

wmc::ProductDistribution make_dist(const DistSpec& spec) {
  if (!spec.factors_path.empty()) return wmc::read_factors(spec.factors_path);
  wmc::ProductDistribution d;
  if (spec.kind == "uniform") {
    d.row = wmc::uniform_vector(spec.n);
    d.col = wmc::uniform_vector(spec.n);
  } else {
    d.row = wmc::power_law(spec.n, spec.exponent);
    d.col = wmc::power_law(spec.n, spec.exponent);
  }
  return d;
}

wmc::WeightPair build_weights(const std::string& scheme_name, const wmc::ProductDistribution& d,
                              std::int64_t m, std::uint64_t seed, double mu0, int rank) {
  const auto scheme = wmc::parse_scheme(scheme_name);
  if (!scheme) throw std::runtime_error("unknown scheme: " + scheme_name);
  switch (*scheme) {
    case wmc::WeightScheme::uniform:
      return wmc::weights_uniform(d.row.size(), d.col.size());
    case wmc::WeightScheme::true_sqrt:
      return wmc::weights_true_sqrt(wmc::normalized_target(d));
    case wmc::WeightScheme::empirical_sqrt:
      return wmc::weights_empirical_sqrt(
          wmc::stage_one_sample(wmc::normalized_target(d), m, seed));
    case wmc::WeightScheme::smoothed:
      return wmc::weights_smoothed(wmc::stage_one_sample(wmc::normalized_target(d), m, seed));
    case wmc::WeightScheme::theorem3:
      return wmc::weights_theorem3(wmc::stage_one_sample(wmc::normalized_target(d), m, seed),
                                   mu0, rank)
          .first;
  }
  throw std::runtime_error("unknown scheme: " + scheme_name);
}

int resolve_jobs(int flag_value) {
  // WMC_JOBS overrides the flag when set and parseable.
  if (const char* env = std::getenv("WMC_JOBS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end && *end == '\0' && v >= 0) return static_cast<int>(v);
    std::cerr << "warning: ignoring unparseable WMC_JOBS='" << env << "'\n";
  }
  return flag_value;
}

void run_phase(const wmc::ExperimentConfig& cfg, const std::string& out_dir, int jobs) {
  std::filesystem::create_directories(out_dir);
  const auto out_path = [&out_dir](const char* name) {
    return (std::filesystem::path(out_dir) / name).string();
  };

  const wmc::PhaseGrid grid = wmc::run_grid(cfg, jobs, &std::cerr);
  wmc::emit_csv(grid, out_path("grid.csv"));
  wmc::emit_plot_data(grid, out_dir);

  std::vector<std::int64_t> m_grid;
  for (double rate : cfg.rates) {
    m_grid.push_back(std::llround(rate * static_cast<double>(cfg.n) * cfg.n));
  }
  std::vector<std::uint64_t> seeds;
  const wmc::Rng curve_master = wmc::Rng(cfg.seed).derive(0x75716672);  // distinct stream tag
  for (int t = 0; t < cfg.trials; ++t) {
    seeds.push_back(curve_master.derive(static_cast<std::uint64_t>(t)).seed());
  }
  wmc::ProductDistribution dist;
  dist.row = wmc::power_law(cfg.n, cfg.exponent);
  dist.col = wmc::power_law(cfg.n, cfg.exponent);
  wmc::write_unique_fraction(
      wmc::unique_fraction_curve(dist, m_grid, {cfg.n, cfg.n}, seeds),
      out_path("unique_fraction.dat"));

  wmc::write_run_meta(cfg, jobs, out_path("run_meta"));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weighted nuclear norm matrix completion toolkit"};
  app.set_version_flag("--version", wmc::kVersion);
  app.require_subcommand(1);

  // estimate: Hoeffding sample-size planning, optional Monte Carlo coverage.
  auto* est_cmd = app.add_subcommand("estimate", "sample-size planning for factor estimation");
  DistSpec est_dist;
  add_dist_flags(est_cmd, &est_dist);
  double est_alpha = 0.5, est_epsilon = 0.1;
  std::string est_sided = "one";
  int est_verify = 0;
  std::uint64_t est_seed = 0;
  est_cmd->add_option("--alpha", est_alpha, "multiplicative deviation parameter")->required();
  est_cmd->add_option("--epsilon", est_epsilon, "failure probability")->required();
  est_cmd->add_option("--sided", est_sided, "one | two")->check(CLI::IsMember({"one", "two"}));
  est_cmd->add_option("--verify", est_verify, "Monte Carlo runs to verify coverage");
  est_cmd->add_option("--seed", est_seed, "seed for --verify");
  est_cmd->callback([&]() {
    const wmc::ProductDistribution d = wmc::normalized_target(make_dist(est_dist));
    const wmc::BoundPlan plan = est_sided == "two"
                                    ? wmc::sample_size_two_sided(d, est_alpha, est_epsilon)
                                    : wmc::sample_size_one_sided(d, est_alpha, est_epsilon);
    std::printf("m_required = %lld\n", static_cast<long long>(plan.m_required));
    if (est_verify > 0) {
      const double coverage = wmc::coverage_frequency(d, plan, est_verify, est_seed);
      std::printf("coverage = %.6f (%d runs)\n", coverage, est_verify);
    }
  });

  // weights: print or save the weight vectors for a scheme.
  auto* w_cmd = app.add_subcommand("weights", "build weight vectors for a scheme");
  DistSpec w_dist;
  add_dist_flags(w_cmd, &w_dist);
  std::string w_scheme;
  std::int64_t w_m = 10000;
  std::uint64_t w_seed = 0;
  double w_mu0 = 1.0;
  int w_rank = 1;
  std::string w_out;
  w_cmd->add_option("--scheme", w_scheme, "uniform | true_sqrt | empirical_sqrt | smoothed | theorem3")
      ->required();
  w_cmd->add_option("--m", w_m, "stage-one draws for empirical schemes");
  w_cmd->add_option("--seed", w_seed, "stage-one seed for empirical schemes");
  w_cmd->add_option("--mu0", w_mu0, "coherence for support sizing (theorem3)");
  w_cmd->add_option("--rank", w_rank, "rank for support sizing (theorem3)");
  w_cmd->add_option("--out", w_out, "write weights to this file instead of stdout");
  w_cmd->callback([&]() {
    const wmc::WeightPair w =
        build_weights(w_scheme, make_dist(w_dist), w_m, w_seed, w_mu0, w_rank);
    if (!w_out.empty()) {
      wmc::write_weights(w, w_out);
    } else {
      for (std::size_t i = 0; i < w.r_weights.size(); ++i) {
        std::printf("%.17g%s", w.r_weights[i], i + 1 < w.r_weights.size() ? " " : "\n");
      }
      for (std::size_t j = 0; j < w.c_weights.size(); ++j) {
        std::printf("%.17g%s", w.c_weights[j], j + 1 < w.c_weights.size() ? " " : "\n");
      }
    }
  });

  // check: evaluate one recovery sufficiency condition.
  auto* c_cmd = app.add_subcommand("check", "evaluate a recovery sufficiency condition");
  DistSpec c_dist;
  add_dist_flags(c_cmd, &c_dist);
  std::string c_condition;
  double c_multiplier = 1.0, c_mu0 = 1.0, c_alpha = 0.5, c_c0 = 1.0;
  int c_rank = 1;
  std::int64_t c_m = 10000;
  std::uint64_t c_seed = 0;
  std::string c_weights_path, c_scheme = "theorem3", c_matrix_path;
  int c_gen_rank = 0;
  c_cmd->add_option("--condition", c_condition,
                    "theorem1 | theorem2 | theorem3 | unweighted | leverage")
      ->required()
      ->check(CLI::IsMember({"theorem1", "theorem2", "theorem3", "unweighted", "leverage"}));
  c_cmd->add_option("--multiplier", c_multiplier, "Bernoulli rate multiplier");
  c_cmd->add_option("--mu0", c_mu0, "coherence");
  c_cmd->add_option("--rank", c_rank, "rank");
  c_cmd->add_option("--alpha", c_alpha, "deviation parameter");
  c_cmd->add_option("--c0", c_c0, "universal constant");
  c_cmd->add_option("--weights", c_weights_path, "weight file for theorem1/theorem2");
  c_cmd->add_option("--scheme", c_scheme, "scheme to build weights when --weights absent");
  c_cmd->add_option("--m", c_m, "stage-one draws for empirical weights");
  c_cmd->add_option("--seed", c_seed, "stage-one / matrix seed");
  c_cmd->add_option("--matrix", c_matrix_path, "matrix CSV for the leverage condition");
  c_cmd->add_option("--gen-rank", c_gen_rank, "generate a random rank-r matrix for leverage");
  c_cmd->callback([&]() {
    const wmc::ProductDistribution rates = make_dist(c_dist);
    wmc::ConditionReport report;
    if (c_condition == "theorem1" || c_condition == "theorem2") {
      const wmc::WeightPair w =
          !c_weights_path.empty()
              ? wmc::read_weights(c_weights_path)
              : build_weights(c_scheme, rates, c_m, c_seed, c_mu0, c_rank);
      if (c_condition == "theorem1") {
        report = wmc::check_theorem1(rates, c_multiplier, w, c_mu0, c_rank, c_c0);
      } else {
        const double sum_p = c_multiplier * rates.total();
        const int n = rates.row.size();
        const wmc::SupportSets sets =
            wmc::support_sets(w.r_weights, w.c_weights, n, c_mu0, c_rank);
        const wmc::EmpiricalEstimate est =
            wmc::stage_one_sample(wmc::normalized_target(rates), c_m, c_seed);
        report = wmc::check_theorem2(est, sum_p, w, sets, c_alpha, c_c0);
      }
    } else if (c_condition == "theorem3") {
      report = wmc::check_theorem3_conditions(rates, c_mu0, c_rank, c_alpha, c_c0);
    } else if (c_condition == "unweighted") {
      const wmc::ProductDistribution d = wmc::normalized_target(rates);
      report = wmc::check_unweighted(d, c_mu0, c_rank, d.row.size(), c_c0);
    } else {
      wmc::Matrix m;
      if (!c_matrix_path.empty()) {
        m = wmc::read_matrix_csv(c_matrix_path);
      } else if (c_gen_rank > 0) {
        m = wmc::random_low_rank(rates.row.size(), c_gen_rank, c_seed);
      } else {
        throw std::runtime_error("leverage condition needs --matrix or --gen-rank");
      }
      report = wmc::check_leverage_condition(m, rates, c_multiplier, c_c0);
    }
    std::printf("%s\n", wmc::to_csv_row(report).c_str());
  });

  // solve: complete a matrix from an observation CSV.
  auto* s_cmd = app.add_subcommand("solve", "complete a matrix from observed entries");
  std::string s_obs_path, s_weights_path, s_out_path;
  int s_rows = 0, s_cols = 0;
  wmc::SolverConfig s_cfg;
  s_cmd->add_option("--obs", s_obs_path, "observation CSV (header i,j,value)")->required();
  s_cmd->add_option("--rows", s_rows, "matrix rows (default: max observed index + 1)");
  s_cmd->add_option("--cols", s_cols, "matrix cols (default: max observed index + 1)");
  s_cmd->add_option("--weights", s_weights_path, "weight file; omit for the unweighted program");
  s_cmd->add_option("--out", s_out_path, "write the completed matrix as CSV");
  s_cmd->add_option("--tol", s_cfg.tol_feasibility, "relative feasibility tolerance");
  s_cmd->add_option("--max-iters", s_cfg.max_iters, "iteration cap");
  s_cmd->add_option("--mu-init", s_cfg.mu_init, "initial penalty multiplier");
  s_cmd->add_option("--rho", s_cfg.rho, "penalty growth factor");
  s_cmd->add_option("--mu-max", s_cfg.mu_max, "penalty ceiling, same scaling as --mu-init");
  s_cmd->callback([&]() {
    const wmc::ObservationSet obs = wmc::read_observations_csv(s_obs_path, s_rows, s_cols);
    const wmc::SolveResult result =
        s_weights_path.empty()
            ? wmc::solve_unweighted(obs, s_cfg)
            : wmc::solve_weighted(obs, wmc::read_weights(s_weights_path), s_cfg);
    if (!s_out_path.empty()) wmc::write_matrix_csv(result.matrix, s_out_path);
    std::printf("%d,%d,%.9e\n", result.converged ? 1 : 0, result.iterations,
                result.final_residual);
  });

  // phase: run a recovery-probability grid and emit data files.
  auto* p_cmd = app.add_subcommand("phase", "run a phase-transition grid");
  std::string p_config_path, p_preset, p_out_dir = ".";
  int p_jobs = 0;
  std::uint64_t p_seed = 0;
  bool p_seed_set = false;
  p_cmd->add_option("--config", p_config_path, "JSON config file");
  p_cmd->add_option("--preset", p_preset, "desk | paper")
      ->check(CLI::IsMember({"desk", "paper"}));
  p_cmd->add_option("--out-dir", p_out_dir, "output directory");
  p_cmd->add_option("--jobs", p_jobs, "worker threads (0 = hardware)");
  p_cmd->add_option("--seed", p_seed, "master seed override")
      ->each([&](const std::string&) { p_seed_set = true; });
  p_cmd->callback([&]() {
    if (p_config_path.empty() == p_preset.empty()) {
      throw std::runtime_error("phase needs exactly one of --config or --preset");
    }
    wmc::ExperimentConfig cfg;
    if (!p_config_path.empty()) {
      cfg = wmc::config_from_json_file(p_config_path);
    } else {
      cfg = *wmc::preset_by_name(p_preset);
    }
    if (p_seed_set) cfg.seed = p_seed;
    run_phase(cfg, p_out_dir, resolve_jobs(p_jobs));
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
