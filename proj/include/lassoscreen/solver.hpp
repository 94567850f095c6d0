#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "lassoscreen/data.hpp"
#include "lassoscreen/types.hpp"

namespace lassoscreen {

/// Convergence thresholds. gap_frac is relative to the null primal
/// 0.5 ||y||^2, infeas_frac relative to lambda_max of the dataset.
struct Tolerances {
  double gap_frac = 1e-6;
  double infeas_frac = 1e-5;
  Index max_passes = 100000;
  Index screen_every = 10;
};

struct SolverState {
  Vector beta;
  Vector residual;  // y - X beta, maintained incrementally
  Vector theta;     // dual point from the last checkpoint
  double gap = std::numeric_limits<double>::infinity();
  double infeas = std::numeric_limits<double>::infinity();
  std::vector<Index> working;       // predictors swept by cd_pass
  std::vector<Index> screened_out;  // certified zero by dynamic screening
  Index passes = 0;
  Index coord_updates = 0;
  bool converged = false;
};

struct NonconvergenceError : std::runtime_error {
  SolverState last_state;
  NonconvergenceError(const std::string& msg, SolverState state)
      : std::runtime_error(msg), last_state(std::move(state)) {}
};

inline double soft_threshold(double z, double gamma) {
  if (z > gamma) return z - gamma;
  if (z < -gamma) return z + gamma;
  return 0.0;
}

/// Zero coefficients, residual equal to y, every predictor in the working set.
inline SolverState initial_state(const Dataset& data) {
  SolverState state;
  state.beta = Vector::Zero(data.p);
  state.residual = data.y;
  state.working.resize(data.p);
  for (Index j = 0; j < data.p; ++j) state.working[j] = j;
  return state;
}

/// One cyclical sweep over the working set in ascending index order.
inline void cd_pass(SolverState& state, const Dataset& data, double lam) {
  for (Index j : state.working) {
    const double norm_sq = data.col_norms[j] * data.col_norms[j];
    const double z = data.X.col(j).dot(state.residual) + norm_sq * state.beta[j];
    const double updated = soft_threshold(z, lam) / norm_sq;
    const double delta = updated - state.beta[j];
    if (delta != 0.0) {
      state.residual -= delta * data.X.col(j);
      state.beta[j] = updated;
    }
    ++state.coord_updates;
  }
  ++state.passes;
}

/// Dual-feasible point by scaling: theta = r / max(max_j |x_j'r|, lam).
inline Vector dual_point(const Vector& residual, const Dataset& data, double lam) {
  const double max_corr = (data.X.transpose() * residual).cwiseAbs().maxCoeff();
  return residual / std::max(max_corr, lam);
}

/// G = 0.5 ||y - X beta||^2 + lam ||beta||_1 - lam theta'y + (lam^2/2) theta'theta.
inline double duality_gap(const Vector& beta, const Vector& theta,
                          const Dataset& data, double lam) {
  const double resid_sq = (data.y - data.X * beta).squaredNorm();
  return 0.5 * resid_sq + lam * beta.template lpNorm<1>() -
         lam * theta.dot(data.y) + 0.5 * lam * lam * theta.squaredNorm();
}

/// max_j (|x_j'r| - lam); negative once the correlations drop below lam.
inline double infeasibility(const Vector& residual, const Dataset& data, double lam) {
  return (data.X.transpose() * residual).cwiseAbs().maxCoeff() - lam;
}

/// Coordinate descent at a fixed lam. Every tol.screen_every passes the
/// residual is rebuilt from scratch, the dual point / gap / infeasibility are
/// recomputed, convergence is tested, and (when dynamic_screen is set) the
/// Gap Safe check certifies predictors out and rebuilds the working set as
/// everything not yet certified. Masked predictors are excluded throughout,
/// so the solve operates on the reduced problem over the unmasked columns.
///
/// A default-constructed warm state means a cold start: beta = 0 and a full
/// working set. Otherwise the caller supplies beta, residual and working,
/// with beta zero on every masked predictor.
inline SolverState solve(const Dataset& data, double lam, SolverState warm,
                         const std::vector<char>& masked, const Tolerances& tol,
                         bool dynamic_screen) {
  if (!(lam > 0.0)) throw std::invalid_argument("solve: lam must be positive");
  SolverState state = std::move(warm);
  if (state.beta.size() == 0) {
    state = initial_state(data);
  } else if (state.beta.size() != data.p) {
    throw std::invalid_argument("solve: warm state does not match dataset");
  }
  state.passes = 0;
  state.coord_updates = 0;
  state.screened_out.clear();
  state.converged = false;

  const Index p = data.p;
  std::vector<char> out(static_cast<size_t>(p), 0);
  if (!masked.empty()) {
    for (Index j = 0; j < p; ++j) out[static_cast<size_t>(j)] = masked[static_cast<size_t>(j)];
    std::erase_if(state.working,
                  [&](Index j) { return out[static_cast<size_t>(j)] != 0; });
  }

  const double gap_thresh = tol.gap_frac * data.null_primal();
  const double infeas_thresh = tol.infeas_frac * data.max_abs_xty;
  Vector xtr(p);

  while (true) {
    for (Index s = 0; s < tol.screen_every; ++s) cd_pass(state, data, lam);

    // checkpoint: rebuild the residual to flush incremental drift
    state.residual = data.y;
    for (Index j = 0; j < p; ++j) {
      if (state.beta[j] != 0.0) state.residual -= state.beta[j] * data.X.col(j);
    }

    double max_corr = 0.0;
    for (Index j = 0; j < p; ++j) {
      if (out[static_cast<size_t>(j)]) {
        xtr[j] = 0.0;
        continue;
      }
      xtr[j] = data.X.col(j).dot(state.residual);
      max_corr = std::max(max_corr, std::abs(xtr[j]));
    }

    const double scale = std::max(max_corr, lam);
    state.theta = state.residual / scale;
    state.gap = 0.5 * state.residual.squaredNorm() +
                lam * state.beta.template lpNorm<1>() -
                lam * state.theta.dot(data.y) +
                0.5 * lam * lam * state.theta.squaredNorm();
    state.infeas = max_corr - lam;

    if (state.gap <= gap_thresh && state.infeas <= infeas_thresh) {
      state.converged = true;
      return state;
    }

    if (dynamic_screen) {
      const double radius = std::sqrt(std::max(state.gap, 0.0)) / lam;
      for (Index j = 0; j < p; ++j) {
        if (out[static_cast<size_t>(j)]) continue;
        if (std::abs(xtr[j]) / scale + data.col_norms[j] * radius < 1.0) {
          out[static_cast<size_t>(j)] = 1;
          state.screened_out.push_back(j);
          if (state.beta[j] != 0.0) {
            state.residual += state.beta[j] * data.X.col(j);
            state.beta[j] = 0.0;
          }
        }
      }
      state.working.clear();
      for (Index j = 0; j < p; ++j) {
        if (!out[static_cast<size_t>(j)]) state.working.push_back(j);
      }
    }

    if (state.passes >= tol.max_passes) {
      throw NonconvergenceError(
          "solve: no convergence after " + std::to_string(state.passes) +
              " passes (lam = " + std::to_string(lam) + ")",
          std::move(state));
    }
  }
}

}  // namespace lassoscreen
