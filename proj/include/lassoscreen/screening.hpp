#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "lassoscreen/data.hpp"
#include "lassoscreen/solver.hpp"
#include "lassoscreen/types.hpp"

namespace lassoscreen {

enum class ScreenSource : unsigned char { none = 0, gap_safe_dynamic = 1, look_ahead = 2 };

inline const char* to_string(ScreenSource src) {
  switch (src) {
    case ScreenSource::gap_safe_dynamic: return "gap_safe_dynamic";
    case ScreenSource::look_ahead: return "look_ahead";
    default: return "none";
  }
}

/// Per-predictor, per-path-step discard flags with the rule that set them.
/// A set flag is a certificate that the solution at that step has a zero
/// coefficient for that predictor. Flags are only ever added.
struct ScreenMask {
  Index p = 0;
  Index steps = 0;
  std::vector<char> discard;
  std::vector<ScreenSource> source;

  ScreenMask() = default;
  ScreenMask(Index p_, Index steps_)
      : p(p_),
        steps(steps_),
        discard(static_cast<size_t>(p_) * static_cast<size_t>(steps_), 0),
        source(static_cast<size_t>(p_) * static_cast<size_t>(steps_),
               ScreenSource::none) {}

  size_t pos(Index j, Index k) const {
    return static_cast<size_t>(j) * static_cast<size_t>(steps) + static_cast<size_t>(k);
  }
  bool discarded(Index j, Index k) const { return discard[pos(j, k)] != 0; }
  void set(Index j, Index k, ScreenSource src) {
    const size_t i = pos(j, k);
    if (!discard[i]) {
      discard[i] = 1;
      source[i] = src;
    }
  }
  Index count_at_step(Index k) const {
    Index count = 0;
    for (Index j = 0; j < p; ++j) count += discarded(j, k) ? 1 : 0;
    return count;
  }
  /// Flags for one step in the layout solve() expects as its mask argument.
  std::vector<char> masked_at_step(Index k) const {
    std::vector<char> flags(static_cast<size_t>(p), 0);
    for (Index j = 0; j < p; ++j) flags[static_cast<size_t>(j)] = discard[pos(j, k)];
    return flags;
  }
};

/// Safe discard test at a target penalty: true iff
/// |x_j' theta| + ||x_j|| sqrt(gap_at_target) / lam_target < 1.
inline bool gap_safe_test(Index j, const Vector& theta, double gap_at_target,
                          double lam_target, const Dataset& data) {
  const double corr = std::abs(data.X.col(j).dot(theta));
  const double radius = std::sqrt(std::max(gap_at_target, 0.0)) / lam_target;
  return corr + data.col_norms[j] * radius < 1.0;
}

/// Coefficients of the quadratic (in the target penalty) whose positivity is
/// equivalent to the safe discard test, plus the slack 1 - |x_j' theta| that
/// decides whether squaring the test was valid.
struct QuadCoeffs {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;  // always <= 0: product of -(residual norm)^2/2 and ||x_j||^2
  double slack = 0.0;
};

/// Range of penalties certified safe to discard, as computed from QuadCoeffs.
/// lo is always excluded; hi is excluded too when it is a root of the
/// quadratic, since the discard test is a strict inequality.
struct LambdaInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool hi_open = false;

  bool empty() const { return !(hi > lo); }
  bool contains(double lam) const {
    if (!(lam > lo)) return false;
    return hi_open ? lam < hi : lam <= hi;
  }
};

namespace detail {

inline QuadCoeffs lookahead_coeffs_shared(double abs_corr, double norm_sq,
                                          double theta_sq, double theta_dot_y,
                                          double beta_l1, double resid_sq) {
  QuadCoeffs q;
  q.slack = 1.0 - abs_corr;
  q.a = q.slack * q.slack - 0.5 * theta_sq * norm_sq;
  q.b = (theta_dot_y - beta_l1) * norm_sq;
  q.c = -0.5 * resid_sq * norm_sq;
  return q;
}

// Roots of a x^2 + b x + c without cancellation: the root q/a pairs the large
// magnitudes, c/q recovers the small one. q can only vanish when b = c = 0,
// where both roots are zero.
inline void stable_quad_roots(double a, double b, double c, double& lo, double& hi) {
  const double disc = b * b - 4.0 * a * c;
  const double q = -0.5 * (b + std::copysign(std::sqrt(std::max(disc, 0.0)), b));
  double r1 = 0.0;
  double r2 = 0.0;
  if (q != 0.0) {
    r1 = q / a;
    r2 = c / q;
  }
  lo = std::min(r1, r2);
  hi = std::max(r1, r2);
}

}  // namespace detail

inline QuadCoeffs lookahead_coeffs(Index j, const Vector& beta, const Vector& theta,
                                   const Vector& residual, const Dataset& data) {
  const double norm_sq = data.col_norms[j] * data.col_norms[j];
  return detail::lookahead_coeffs_shared(
      std::abs(data.X.col(j).dot(theta)), norm_sq, theta.squaredNorm(),
      theta.dot(data.y), beta.template lpNorm<1>(), residual.squaredNorm());
}

/// Solves {lam* in (0, lam_current] : slack > 0 and a lam*^2 + b lam* + c > 0}.
///
/// The sign of a fixes the shape. Since c <= 0 the parabola is nonpositive at
/// zero, so:
///   a > 0: upward parabola, roots straddle zero, solutions above the larger
///          root; intersecting with (0, lam_current] gives (root+, lam_current].
///   a ~ 0: linear. b <= 0 leaves nothing positive; b > 0 gives (-c/b, lam_current].
///   a < 0: downward parabola, positive only strictly between two nonnegative
///          roots (when they exist), clipped to lam_current from above.
inline LambdaInterval lookahead_interval(const QuadCoeffs& q, double lam_current) {
  LambdaInterval iv;
  if (!(q.slack > 0.0)) return iv;

  const double mag = std::max({std::abs(q.b), std::abs(q.c), 1.0});
  if (std::abs(q.a) < 1e-14 * mag) {
    if (q.b > 0.0) {
      const double root = -q.c / q.b;
      if (root < lam_current) {
        iv.lo = std::max(root, 0.0);
        iv.hi = lam_current;
      }
    }
    return iv;
  }

  double root_lo = 0.0;
  double root_hi = 0.0;
  detail::stable_quad_roots(q.a, q.b, q.c, root_lo, root_hi);

  if (q.a > 0.0) {
    const double lam_plus = std::max(root_hi, 0.0);
    if (lam_plus < lam_current) {
      iv.lo = lam_plus;
      iv.hi = lam_current;
    }
    return iv;
  }

  const double disc = q.b * q.b - 4.0 * q.a * q.c;
  if (!(disc > 0.0)) return iv;
  const double lam_minus = std::max(root_lo, 0.0);
  const double lam_plus = root_hi;
  if (!(lam_plus > lam_minus)) return iv;
  if (lam_plus <= lam_current) {
    iv.lo = lam_minus;
    iv.hi = lam_plus;
    iv.hi_open = true;
  } else if (lam_minus < lam_current) {
    iv.lo = lam_minus;
    iv.hi = lam_current;
  }
  return iv;
}

/// Look-ahead pass over a converged state at step k: for every inactive
/// predictor, derive the discard interval once and flag every later grid
/// point that falls inside it. Already-set flags are left alone.
inline void lookahead_screen(const SolverState& state, Index k, const PathSpec& spec,
                             ScreenMask& mask, const Dataset& data) {
  const Index steps = spec.lambdas.size();
  if (k + 1 >= steps) return;

  const double lam_current = spec.lambdas[k];
  const double theta_sq = state.theta.squaredNorm();
  const double theta_dot_y = state.theta.dot(data.y);
  const double beta_l1 = state.beta.template lpNorm<1>();
  const double resid_sq = state.residual.squaredNorm();

  for (Index j = 0; j < data.p; ++j) {
    if (state.beta[j] != 0.0) continue;
    const double norm_sq = data.col_norms[j] * data.col_norms[j];
    const QuadCoeffs q = detail::lookahead_coeffs_shared(
        std::abs(data.X.col(j).dot(state.theta)), norm_sq, theta_sq,
        theta_dot_y, beta_l1, resid_sq);
    const LambdaInterval iv = lookahead_interval(q, lam_current);
    if (iv.empty()) continue;
    for (Index m = k + 1; m < steps; ++m) {
      if (spec.lambdas[m] <= iv.lo) break;  // grid is decreasing
      if (iv.contains(spec.lambdas[m])) mask.set(j, m, ScreenSource::look_ahead);
    }
  }
}

/// Predictors active in a previous solution, the warm working set.
inline std::vector<Index> active_warm_start_set(const SolverState& prev) {
  std::vector<Index> active;
  for (Index j = 0; j < prev.beta.size(); ++j) {
    if (prev.beta[j] != 0.0) active.push_back(j);
  }
  return active;
}

}  // namespace lassoscreen
