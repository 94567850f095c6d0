#pragma once

#include <chrono>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "lassoscreen/data.hpp"
#include "lassoscreen/screening.hpp"
#include "lassoscreen/solver.hpp"
#include "lassoscreen/types.hpp"

namespace lassoscreen {

enum class Strategy { none, gap_safe_aws, gap_safe_aws_lookahead };

inline const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::gap_safe_aws: return "gap_safe_aws";
    case Strategy::gap_safe_aws_lookahead: return "gap_safe_aws_lookahead";
    default: return "none";
  }
}

inline Strategy parse_strategy(const std::string& name) {
  if (name == "none") return Strategy::none;
  if (name == "gap_safe_aws") return Strategy::gap_safe_aws;
  if (name == "gap_safe_aws_lookahead") return Strategy::gap_safe_aws_lookahead;
  throw std::invalid_argument("unknown strategy '" + name +
                              "' (expected none, gap_safe_aws or gap_safe_aws_lookahead)");
}

enum class StopReason { grid_exhausted, dev_ratio, dev_fraction, active_bound };

inline const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::dev_ratio: return "dev_ratio";
    case StopReason::dev_fraction: return "dev_fraction";
    case StopReason::active_bound: return "active_bound";
    default: return "grid_exhausted";
  }
}

/// Fraction of null deviance explained: 1 - ||y - X beta||^2 / ||y||^2.
inline double deviance_ratio(const Vector& beta, const Dataset& data) {
  if (!(data.y_sq_norm > 0.0)) {
    throw DegenerateResponseError("deviance_ratio: response has zero norm");
  }
  return 1.0 - (data.y - data.X * beta).squaredNorm() / data.y_sq_norm;
}

struct PathResult {
  Matrix betas;  // p x steps actually fitted
  Vector lambdas_done;
  Vector dev_ratios;
  Vector gaps;
  Vector infeas;
  ScreenMask mask;  // sized to the full grid, not just the fitted prefix
  std::vector<Index> passes;
  std::vector<Index> coord_updates;
  std::vector<double> wall_times;
  StopReason stop_reason = StopReason::grid_exhausted;

  Index steps_done() const { return betas.cols(); }
  Index total_passes() const {
    Index total = 0;
    for (Index c : passes) total += c;
    return total;
  }
  Index total_coord_updates() const {
    Index total = 0;
    for (Index c : coord_updates) total += c;
    return total;
  }
};

/// Fits the whole penalty grid, warm-starting each step from the previous
/// solution. Step 0 is the null model and is emitted without running the
/// solver. Strategies:
///   none                    full working set, no screening of any kind;
///   gap_safe_aws            working set seeded with the previously active
///                           predictors, dynamic Gap Safe at checkpoints;
///   gap_safe_aws_lookahead  the same, plus a look-ahead pass after each
///                           converged step whose discards are excluded from
///                           all later steps.
/// Stops at the first of: deviance ratio reaching dev_ratio_stop; fractional
/// deviance increase below dev_frac_stop (from the third step on); active
/// predictors reaching active_stop when that bound is enabled.
inline PathResult fit_path(const Dataset& data, const PathSpec& spec,
                           Strategy strategy, const Tolerances& tol = {}) {
  using clock = std::chrono::steady_clock;

  const Index K = spec.lambdas.size();
  const Index p = data.p;
  const double lam_max = lambda_max(data);
  if (K < 1 || std::abs(spec.lambdas[0] - lam_max) > 1e-9 * lam_max) {
    throw std::invalid_argument("fit_path: grid must start at this dataset's lambda_max");
  }

  PathResult result;
  result.mask = ScreenMask(p, K);

  std::vector<Vector> betas;
  std::vector<double> dev_ratios, gaps, infeas_vals, lambdas_done;
  bool stopped = false;

  // step 0 in closed form: beta = 0 is exact at lambda_max
  const auto t0 = clock::now();
  SolverState state;
  state.beta = Vector::Zero(p);
  state.residual = data.y;
  state.theta = data.y / lam_max;
  state.gap = 0.0;
  state.infeas = 0.0;
  state.converged = true;
  if (strategy == Strategy::gap_safe_aws_lookahead) {
    lookahead_screen(state, 0, spec, result.mask, data);
  }
  betas.push_back(state.beta);
  lambdas_done.push_back(lam_max);
  dev_ratios.push_back(0.0);
  gaps.push_back(0.0);
  infeas_vals.push_back(0.0);
  result.passes.push_back(0);
  result.coord_updates.push_back(0);
  result.wall_times.push_back(std::chrono::duration<double>(clock::now() - t0).count());
  if (0.0 >= spec.dev_ratio_stop) {
    result.stop_reason = StopReason::dev_ratio;
    stopped = true;
  }

  const std::vector<char> no_mask;
  for (Index k = 1; k < K && !stopped; ++k) {
    const double lam = spec.lambdas[k];
    const bool use_lookahead = strategy == Strategy::gap_safe_aws_lookahead;
    const std::vector<char> masked =
        use_lookahead ? result.mask.masked_at_step(k) : no_mask;

    SolverState warm;
    warm.beta = state.beta;
    warm.residual = state.residual;
    for (Index j = 0; j < p; ++j) {
      if (!masked.empty() && masked[static_cast<size_t>(j)] && warm.beta[j] != 0.0) {
        warm.residual += warm.beta[j] * data.X.col(j);
        warm.beta[j] = 0.0;
      }
    }
    if (strategy == Strategy::none) {
      warm.working.resize(p);
      for (Index j = 0; j < p; ++j) warm.working[j] = j;
    } else {
      warm.working = active_warm_start_set(warm);
    }

    const auto step_start = clock::now();
    try {
      state = solve(data, lam, std::move(warm), masked, tol,
                    strategy != Strategy::none);
    } catch (NonconvergenceError& err) {
      throw NonconvergenceError(
          "fit_path: step " + std::to_string(k) + ": " + err.what(),
          std::move(err.last_state));
    }
    const double wall = std::chrono::duration<double>(clock::now() - step_start).count();

    for (Index j : state.screened_out) {
      result.mask.set(j, k, ScreenSource::gap_safe_dynamic);
    }
    if (use_lookahead) lookahead_screen(state, k, spec, result.mask, data);

    const double dr = 1.0 - state.residual.squaredNorm() / data.y_sq_norm;
    betas.push_back(state.beta);
    lambdas_done.push_back(lam);
    dev_ratios.push_back(dr);
    gaps.push_back(state.gap);
    infeas_vals.push_back(state.infeas);
    result.passes.push_back(state.passes);
    result.coord_updates.push_back(state.coord_updates);
    result.wall_times.push_back(wall);

    Index n_active = 0;
    for (Index j = 0; j < p; ++j) n_active += state.beta[j] != 0.0 ? 1 : 0;

    if (dr >= spec.dev_ratio_stop) {
      result.stop_reason = StopReason::dev_ratio;
      stopped = true;
    } else if (k >= 2 && dr > 0.0 &&
               (dr - dev_ratios[static_cast<size_t>(k - 1)]) / dr < spec.dev_frac_stop) {
      result.stop_reason = StopReason::dev_fraction;
      stopped = true;
    } else if (spec.active_stop > 0 && n_active >= spec.active_stop) {
      result.stop_reason = StopReason::active_bound;
      stopped = true;
    }
  }

  const Index done = static_cast<Index>(betas.size());
  result.betas.resize(p, done);
  result.lambdas_done.resize(done);
  result.dev_ratios.resize(done);
  result.gaps.resize(done);
  result.infeas.resize(done);
  for (Index k = 0; k < done; ++k) {
    result.betas.col(k) = betas[static_cast<size_t>(k)];
    result.lambdas_done[k] = lambdas_done[static_cast<size_t>(k)];
    result.dev_ratios[k] = dev_ratios[static_cast<size_t>(k)];
    result.gaps[k] = gaps[static_cast<size_t>(k)];
    result.infeas[k] = infeas_vals[static_cast<size_t>(k)];
  }
  if (!stopped) result.stop_reason = StopReason::grid_exhausted;
  return result;
}

}  // namespace lassoscreen
