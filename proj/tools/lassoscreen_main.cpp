#include <CLI11.hpp>

#include <lassoscreen/lassoscreen.hpp>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <iostream>
#include <numeric>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace ls = lassoscreen;

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point start) {
  return std::chrono::duration<double>(clock_type::now() - start).count();
}

// original column indices of the retained predictors
std::vector<ls::Index> kept_columns(const ls::StandardizeInfo& info) {
  std::vector<ls::Index> kept;
  for (ls::Index j = 0; j < info.x_scales.size(); ++j) {
    if (info.x_scales[j] > 0.0) kept.push_back(j);
  }
  return kept;
}

struct FitOptions {
  std::string input;
  std::string out = "fit";
  std::string strategy = "gap_safe_aws_lookahead";
  ls::Index path_length = 100;
  double eps = 0.0;
  double gap_tol = 1e-6;
  double infeas_tol = 1e-5;
};

int cmd_fit(const FitOptions& opt) {
  const ls::DesignData design = ls::read_design_csv(opt.input);
  auto [data, info] = ls::standardize(design.X, design.y);
  const ls::PathSpec spec = ls::default_path_spec(data, opt.path_length, opt.eps);
  ls::Tolerances tol;
  tol.gap_frac = opt.gap_tol;
  tol.infeas_frac = opt.infeas_tol;
  const ls::Strategy strategy = ls::parse_strategy(opt.strategy);

  const auto start = clock_type::now();
  const ls::PathResult result = ls::fit_path(data, spec, strategy, tol);
  const double wall = seconds_since(start);

  // report coefficients against the input columns, zeros where dropped
  const std::vector<ls::Index> kept = kept_columns(info);
  const ls::Index p_raw = design.X.cols();
  nlohmann::json doc = ls::path_result_json(result);
  nlohmann::json betas = nlohmann::json::array();
  for (ls::Index k = 0; k < result.steps_done(); ++k) {
    std::vector<double> mapped(static_cast<size_t>(p_raw), 0.0);
    for (size_t i = 0; i < kept.size(); ++i) {
      mapped[static_cast<size_t>(kept[i])] = result.betas(static_cast<ls::Index>(i), k);
    }
    betas.push_back(std::move(mapped));
  }
  doc["betas"] = std::move(betas);
  for (nlohmann::json& entry : doc["screened"]) {
    entry["predictor"] = kept[entry["predictor"].get<size_t>()];
  }
  doc["predictors"] = design.names;
  doc["dropped_columns"] = info.dropped;
  doc["y_mean"] = info.y_mean;
  doc["strategy"] = opt.strategy;
  doc["wall_time_total"] = wall;

  {
    std::ofstream out_json(opt.out + ".json");
    if (!out_json) throw ls::CsvError(opt.out + ".json: cannot open file for writing");
    out_json << doc.dump(2) << '\n';
  }
  ls::write_path_csv(opt.out + "_steps.csv", result);

  std::cout << "fitted " << result.steps_done() << " steps, stop_reason="
            << ls::to_string(result.stop_reason) << ", wall_time=" << wall
            << "s\nwrote " << opt.out << ".json and " << opt.out << "_steps.csv\n";
  return 0;
}

struct SimOptions {
  std::string out = "sim.csv";
  ls::Index n = 100;
  ls::Index p = 1000;
  ls::Index k_signals = 5;
  double snr = 1.0;
  double rho = 0.0;
  std::uint64_t seed = 0;
};

ls::SimSpec to_sim_spec(const SimOptions& opt) {
  ls::SimSpec spec;
  spec.n = opt.n;
  spec.p = opt.p;
  spec.k_signals = opt.k_signals;
  spec.snr = opt.snr;
  spec.cov = opt.rho > 0.0 ? ls::CovKind::ar1 : ls::CovKind::identity;
  spec.rho = opt.rho;
  spec.seed = opt.seed;
  return spec;
}

int cmd_simulate(const SimOptions& opt) {
  const ls::SimData sim = ls::generate(to_sim_spec(opt));
  ls::write_design_csv(opt.out, sim.X, sim.y);
  std::cout << "wrote " << opt.out << " (n=" << opt.n << ", p=" << opt.p
            << ", sigma2=" << sim.sigma2 << ")\n";
  return 0;
}

struct BenchOptions {
  std::string out = "bench.csv";
  ls::Index n = 100;
  ls::Index p = 2000;
  ls::Index k_signals = 5;
  double rho = 0.0;
  std::uint64_t seed = 0;
  ls::Index reps = 20;
  ls::Index path_length = 100;
  double eps = 0.0;
  double gap_tol = 1e-6;
  double infeas_tol = 1e-5;
  std::vector<double> snrs;
  std::vector<std::string> strategies;
};

int cmd_bench(const BenchOptions& opt) {
  if (opt.reps < 1) throw std::invalid_argument("bench: repetitions must be >= 1");
  const std::vector<double> snrs = opt.snrs.empty() ? std::vector<double>{0.1, 1.0, 6.0} : opt.snrs;
  std::vector<ls::Strategy> strategies;
  if (opt.strategies.empty()) {
    strategies = {ls::Strategy::gap_safe_aws, ls::Strategy::gap_safe_aws_lookahead};
  } else {
    for (const std::string& name : opt.strategies) strategies.push_back(ls::parse_strategy(name));
  }
  ls::Tolerances tol;
  tol.gap_frac = opt.gap_tol;
  tol.infeas_frac = opt.infeas_tol;

  const auto fit_once = [&](double snr, std::uint64_t seed, ls::Strategy strategy,
                            double& wall) {
    ls::SimSpec sim_spec;
    sim_spec.n = opt.n;
    sim_spec.p = opt.p;
    sim_spec.k_signals = opt.k_signals;
    sim_spec.snr = snr;
    sim_spec.cov = opt.rho > 0.0 ? ls::CovKind::ar1 : ls::CovKind::identity;
    sim_spec.rho = opt.rho;
    sim_spec.seed = seed;
    const ls::SimData sim = ls::generate(sim_spec);
    auto [data, info] = ls::standardize(sim.X, sim.y);
    const ls::PathSpec path_spec = ls::default_path_spec(data, opt.path_length, opt.eps);
    const auto start = clock_type::now();
    ls::PathResult result = ls::fit_path(data, path_spec, strategy, tol);
    wall = seconds_since(start);
    return result;
  };

  // one unrecorded repetition so allocator and cache warm-up stays out of row 0
  {
    double wall = 0.0;
    for (const ls::Strategy strategy : strategies) {
      (void)fit_once(snrs.front(), ls::stream_seed(opt.seed, 0), strategy, wall);
    }
  }

  std::vector<ls::BenchRow> rows;
  for (const double snr : snrs) {
    for (ls::Index rep = 0; rep < opt.reps; ++rep) {
      const std::uint64_t seed_rep = ls::stream_seed(opt.seed, static_cast<std::uint64_t>(rep));
      for (const ls::Strategy strategy : strategies) {
        double wall = 0.0;
        const ls::PathResult result = fit_once(snr, seed_rep, strategy, wall);
        ls::BenchRow row;
        row.snr = snr;
        row.strategy = ls::to_string(strategy);
        row.repetition = rep;
        row.seed = seed_rep;
        row.wall_time_s = wall;
        row.total_passes = result.total_passes();
        row.total_coord_updates = result.total_coord_updates();
        row.steps_done = result.steps_done();
        rows.push_back(std::move(row));
      }
    }
  }
  ls::write_bench_csv(opt.out, rows);
  std::cout << "wrote " << opt.out << " (" << rows.size() << " rows)\n";
  return 0;
}

struct ScreenmapOptions {
  std::string input;
  std::string out = "screenmap.csv";
  ls::Index n = 100;
  ls::Index p = 1000;
  ls::Index k_signals = 5;
  double snr = 1.0;
  double rho = 0.0;
  std::uint64_t seed = 0;
  ls::Index path_length = 100;
  double eps = 0.0;
  ls::Index subsample = 0;
};

int cmd_screenmap(const ScreenmapOptions& opt) {
  ls::Dataset data;
  ls::StandardizeInfo info;
  if (!opt.input.empty()) {
    const ls::DesignData design = ls::read_design_csv(opt.input);
    std::tie(data, info) = ls::standardize(design.X, design.y);
  } else {
    SimOptions sim_opt;
    sim_opt.n = opt.n;
    sim_opt.p = opt.p;
    sim_opt.k_signals = opt.k_signals;
    sim_opt.snr = opt.snr;
    sim_opt.rho = opt.rho;
    sim_opt.seed = opt.seed;
    const ls::SimData sim = ls::generate(to_sim_spec(sim_opt));
    std::tie(data, info) = ls::standardize(sim.X, sim.y);
  }
  const ls::PathSpec spec = ls::default_path_spec(data, opt.path_length, opt.eps);
  const double lam_max = spec.lambdas[0];

  ls::SolverState state;
  state.beta = ls::Vector::Zero(data.p);
  state.residual = data.y;
  state.theta = data.y / lam_max;
  state.gap = 0.0;
  state.infeas = 0.0;
  state.converged = true;

  ls::ScreenMask mask(data.p, spec.lambdas.size());
  ls::lookahead_screen(state, 0, spec, mask, data);

  std::vector<ls::Index> selected(static_cast<size_t>(data.p));
  std::iota(selected.begin(), selected.end(), ls::Index{0});
  if (opt.subsample > 0 && opt.subsample < data.p) {
    std::mt19937_64 rng(ls::stream_seed(opt.seed, 1));
    std::shuffle(selected.begin(), selected.end(), rng);
    selected.resize(static_cast<size_t>(opt.subsample));
    std::sort(selected.begin(), selected.end());
  }

  const std::vector<ls::Index> kept = kept_columns(info);
  std::vector<ls::Index> labels;
  for (const ls::Index j : selected) labels.push_back(kept[static_cast<size_t>(j)]);
  ls::write_screenmask_csv(opt.out, mask, spec.lambdas, selected, labels);
  std::cout << "wrote " << opt.out << " (" << selected.size() << " predictors, "
            << spec.lambdas.size() << " steps)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pathwise lasso solver with Gap Safe and look-ahead screening"};
  app.require_subcommand(1);

  FitOptions fit_opt;
  CLI::App* fit = app.add_subcommand("fit", "fit a lasso path to a CSV dataset");
  fit->add_option("input", fit_opt.input, "CSV file, header row, first column y")->required();
  fit->add_option("--strategy", fit_opt.strategy, "none | gap_safe_aws | gap_safe_aws_lookahead");
  fit->add_option("--path-length", fit_opt.path_length, "number of grid points");
  fit->add_option("--eps", fit_opt.eps, "grid range ratio, 0 = glmnet default");
  fit->add_option("--gap-tol", fit_opt.gap_tol, "duality gap fraction for convergence");
  fit->add_option("--infeas-tol", fit_opt.infeas_tol, "infeasibility fraction for convergence");
  fit->add_option("--out", fit_opt.out, "output prefix for .json and _steps.csv");

  SimOptions sim_opt;
  CLI::App* sim = app.add_subcommand("simulate", "generate a synthetic dataset CSV");
  sim->add_option("--n", sim_opt.n, "observations");
  sim->add_option("--p", sim_opt.p, "predictors");
  sim->add_option("--k-signals", sim_opt.k_signals, "number of unit coefficients");
  sim->add_option("--snr", sim_opt.snr, "signal-to-noise ratio");
  sim->add_option("--rho", sim_opt.rho, "AR(1) correlation, 0 = identity covariance");
  sim->add_option("--seed", sim_opt.seed, "random seed");
  sim->add_option("--out", sim_opt.out, "output CSV path");

  BenchOptions bench_opt;
  CLI::App* bench = app.add_subcommand("bench", "time path fits across strategies and SNRs");
  bench->add_option("--n", bench_opt.n, "observations");
  bench->add_option("--p", bench_opt.p, "predictors");
  bench->add_option("--k-signals", bench_opt.k_signals, "number of unit coefficients");
  bench->add_option("--rho", bench_opt.rho, "AR(1) correlation, 0 = identity covariance");
  bench->add_option("--seed", bench_opt.seed, "base seed, repetitions derive streams from it");
  bench->add_option("--reps", bench_opt.reps, "repetitions per SNR");
  bench->add_option("--path-length", bench_opt.path_length, "number of grid points");
  bench->add_option("--eps", bench_opt.eps, "grid range ratio, 0 = glmnet default");
  bench->add_option("--gap-tol", bench_opt.gap_tol, "duality gap fraction for convergence");
  bench->add_option("--infeas-tol", bench_opt.infeas_tol, "infeasibility fraction for convergence");
  bench->add_option("--snr", bench_opt.snrs, "SNR values (repeatable), default 0.1 1 6");
  bench->add_option("--strategy", bench_opt.strategies,
                    "strategies to bench (repeatable), default gap_safe_aws and lookahead");
  bench->add_option("--out", bench_opt.out, "output CSV path");

  ScreenmapOptions map_opt;
  CLI::App* screenmap = app.add_subcommand(
      "screenmap", "look-ahead discard map from the first path step");
  screenmap->add_option("--input", map_opt.input, "CSV dataset; omit to simulate instead");
  screenmap->add_option("--n", map_opt.n, "observations (simulated input)");
  screenmap->add_option("--p", map_opt.p, "predictors (simulated input)");
  screenmap->add_option("--k-signals", map_opt.k_signals, "number of unit coefficients");
  screenmap->add_option("--snr", map_opt.snr, "signal-to-noise ratio (simulated input)");
  screenmap->add_option("--rho", map_opt.rho, "AR(1) correlation, 0 = identity covariance");
  screenmap->add_option("--seed", map_opt.seed, "random seed");
  screenmap->add_option("--path-length", map_opt.path_length, "number of grid points");
  screenmap->add_option("--eps", map_opt.eps, "grid range ratio, 0 = glmnet default");
  screenmap->add_option("--subsample", map_opt.subsample, "emit only this many random predictors");
  screenmap->add_option("--out", map_opt.out, "output CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (fit->parsed()) return cmd_fit(fit_opt);
    if (sim->parsed()) return cmd_simulate(sim_opt);
    if (bench->parsed()) return cmd_bench(bench_opt);
    if (screenmap->parsed()) return cmd_screenmap(map_opt);
  } catch (const ls::NonconvergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
