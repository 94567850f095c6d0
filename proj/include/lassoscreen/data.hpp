#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "lassoscreen/types.hpp"

namespace lassoscreen {

/// A standardized least-squares problem. Immutable after construction and
/// safe to share across concurrent path fits.
struct Dataset {
  Matrix X;          // n x p
  Vector y;          // centered response
  Vector col_norms;  // l2 norm of each column of X
  Index n = 0;
  Index p = 0;
  double y_sq_norm = 0.0;    // ||y||^2
  double max_abs_xty = 0.0;  // max_j |x_j' y|

  Dataset() = default;

  Dataset(Matrix X_, Vector y_) : X(std::move(X_)), y(std::move(y_)) {
    n = X.rows();
    p = X.cols();
    if (y.size() != n) {
      throw std::invalid_argument("Dataset: X has " + std::to_string(n) +
                                  " rows but y has " + std::to_string(y.size()));
    }
    col_norms.resize(p);
    for (Index j = 0; j < p; ++j) {
      col_norms[j] = X.col(j).norm();
      max_abs_xty = std::max(max_abs_xty, std::abs(X.col(j).dot(y)));
    }
    y_sq_norm = y.squaredNorm();
  }

  /// Primal value of the all-zero model, 0.5 ||y||^2.
  double null_primal() const { return 0.5 * y_sq_norm; }
};

/// Record of the centering/scaling transform, indexed by original column.
/// x_scales[j] is the uncorrected (1/n) standard deviation, 0 for columns
/// dropped because they were constant.
struct StandardizeInfo {
  double y_mean = 0.0;
  Vector x_means;
  Vector x_scales;
  std::vector<Index> dropped;
};

/// Centers y by its mean; centers each column of X and scales it by its
/// uncorrected standard deviation, so retained columns end up with mean 0,
/// unit variance and ||x_j|| = sqrt(n). Constant columns are dropped and
/// recorded in the returned StandardizeInfo.
inline std::pair<Dataset, StandardizeInfo> standardize(const Matrix& raw_X,
                                                       const Vector& raw_y) {
  const Index n = raw_X.rows();
  const Index p_raw = raw_X.cols();
  if (n < 2) throw std::invalid_argument("standardize: need at least 2 observations");
  if (raw_y.size() != n) {
    throw std::invalid_argument("standardize: X has " + std::to_string(n) +
                                " rows but y has " + std::to_string(raw_y.size()));
  }

  StandardizeInfo info;
  info.y_mean = raw_y.mean();
  Vector y = raw_y.array() - info.y_mean;
  info.x_means.resize(p_raw);
  info.x_scales = Vector::Zero(p_raw);

  Matrix cols(n, p_raw);
  std::vector<Index> kept;
  kept.reserve(p_raw);
  for (Index j = 0; j < p_raw; ++j) {
    const double mean = raw_X.col(j).mean();
    info.x_means[j] = mean;
    Vector centered = raw_X.col(j).array() - mean;
    const double sd = std::sqrt(centered.squaredNorm() / static_cast<double>(n));
    if (sd <= 1e-12 * std::max(1.0, std::abs(mean))) {
      info.dropped.push_back(j);
      continue;
    }
    info.x_scales[j] = sd;
    cols.col(static_cast<Index>(kept.size())) = centered / sd;
    kept.push_back(j);
  }
  if (kept.empty()) throw EmptyDesignError("standardize: empty design, all columns have zero variance");

  Matrix X = cols.leftCols(static_cast<Index>(kept.size()));
  return {Dataset(std::move(X), std::move(y)), std::move(info)};
}

/// Smallest penalty at which the all-zero solution is optimal.
inline double lambda_max(const Dataset& data) {
  if (!(data.max_abs_xty > 0.0)) {
    throw DegenerateResponseError("lambda_max: degenerate response, max_j |x_j'y| is zero");
  }
  return data.max_abs_xty;
}

/// Penalty grid plus the path stopping thresholds.
struct PathSpec {
  Vector lambdas;  // strictly decreasing, lambdas[0] = lambda_max
  double eps = 1e-2;
  double dev_ratio_stop = 0.999;
  double dev_frac_stop = 1e-5;
  Index active_stop = -1;  // disabled when negative
};

/// K log-spaced penalties from lam_max down to eps * lam_max, endpoints
/// pinned exactly.
inline PathSpec lambda_grid(double lam_max, double eps, Index K = 100) {
  if (!(lam_max > 0.0)) throw std::invalid_argument("lambda_grid: lam_max must be positive");
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("lambda_grid: eps must lie in (0, 1)");
  if (K < 2) throw std::invalid_argument("lambda_grid: need at least 2 grid points");

  PathSpec spec;
  spec.eps = eps;
  spec.lambdas.resize(K);
  const double log_step = std::log(eps) / static_cast<double>(K - 1);
  for (Index k = 0; k < K; ++k) {
    spec.lambdas[k] = lam_max * std::exp(static_cast<double>(k) * log_step);
  }
  spec.lambdas[0] = lam_max;
  spec.lambdas[K - 1] = eps * lam_max;
  return spec;
}

/// glmnet-style defaults: eps = 1e-2 when p > n, else 1e-4; the active-set
/// stop kicks in at n predictors when p >= n.
inline PathSpec default_path_spec(const Dataset& data, Index K = 100,
                                  double eps_override = 0.0) {
  const double eps = eps_override > 0.0 ? eps_override
                                        : (data.p > data.n ? 1e-2 : 1e-4);
  PathSpec spec = lambda_grid(lambda_max(data), eps, K);
  if (data.p >= data.n) spec.active_stop = data.n;
  return spec;
}

}  // namespace lassoscreen
