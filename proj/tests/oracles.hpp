#pragma once

// Independent reference implementations used to cross-check the library.
// Everything here is written directly against the optimization problem with
// plain Eigen calls and deliberately shares no code with the headers under
// test.

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace oracle {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// 0.5 ||y - X beta||^2 + lam ||beta||_1
inline double primal_value(const Matrix& X, const Vector& y, const Vector& beta,
                           double lam) {
  double l1 = 0.0;
  for (Index j = 0; j < beta.size(); ++j) l1 += std::abs(beta[j]);
  return 0.5 * (y - X * beta).squaredNorm() + lam * l1;
}

// 0.5 y'y - (lam^2/2) ||theta - y/lam||^2
inline double dual_value(const Vector& y, const Vector& theta, double lam) {
  return 0.5 * y.squaredNorm() -
         0.5 * lam * lam * (theta - y / lam).squaredNorm();
}

inline double gap_value(const Matrix& X, const Vector& y, const Vector& beta,
                        const Vector& theta, double lam) {
  return primal_value(X, y, beta, lam) - dual_value(y, theta, lam);
}

// residual scaled into the dual-feasible set
inline Vector scaled_dual_point(const Matrix& X, const Vector& y, const Vector& beta,
                                double lam) {
  const Vector r = y - X * beta;
  double max_corr = 0.0;
  for (Index j = 0; j < X.cols(); ++j) {
    max_corr = std::max(max_corr, std::abs(X.col(j).dot(r)));
  }
  return r / std::max(max_corr, lam);
}

// the safe discard test evaluated from scratch off the primal/dual values
inline bool point_discard_test(const Matrix& X, const Vector& y, Index j,
                               const Vector& beta, const Vector& theta,
                               double lam_target) {
  const double gap = std::max(gap_value(X, y, beta, theta, lam_target), 0.0);
  const double lhs = std::abs(X.col(j).dot(theta)) +
                     X.col(j).norm() * std::sqrt(gap) / lam_target;
  return lhs < 1.0;
}

// Lipschitz constant of the least-squares gradient: largest eigenvalue of
// X'X, computed on whichever Gram matrix is smaller.
inline double lipschitz_constant(const Matrix& X) {
  if (X.rows() <= X.cols()) {
    const Matrix gram = X * X.transpose();
    Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
    return eig.eigenvalues().maxCoeff();
  }
  const Matrix gram = X.transpose() * X;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().maxCoeff();
}

struct IstaResult {
  Vector beta;
  double gap = 0.0;
  long iterations = 0;
  bool converged = false;
};

// Proximal gradient with fixed step 1/L, stopped on the duality gap as a
// fraction of the null primal. Warm start is optional. A relative gap stop
// alone can leave the iterate a sizeable absolute distance from the optimum
// when ||y|| is large, so with move_tol > 0 the solver keeps iterating after
// the gap test passes (up to refine_cap extra iterations) until no coordinate
// moved by more than move_tol, i.e. until it sits at its fixed point.
inline IstaResult ista_solve(const Matrix& X, const Vector& y, double lam,
                             double gap_frac, Vector beta_init = Vector(),
                             long max_iters = 4000000, double move_tol = 0.0,
                             long refine_cap = 20000) {
  const Index p = X.cols();
  IstaResult result;
  result.beta = beta_init.size() == p ? beta_init : Vector::Zero(p);

  const double L = lipschitz_constant(X);
  if (!(L > 0.0)) throw std::runtime_error("ista_solve: zero design matrix");
  const double step = 1.0 / L;
  const double gap_stop = gap_frac * 0.5 * y.squaredNorm();

  Vector r = y - X * result.beta;
  bool gap_ok = false;
  long refine_left = refine_cap;
  for (long it = 1; it <= max_iters; ++it) {
    const Vector grad_step = result.beta + step * (X.transpose() * r);
    double move = 0.0;
    for (Index j = 0; j < p; ++j) {
      const double z = grad_step[j];
      const double t = lam * step;
      const double next = z > t ? z - t : (z < -t ? z + t : 0.0);
      move = std::max(move, std::abs(next - result.beta[j]));
      result.beta[j] = next;
    }
    r = y - X * result.beta;

    if (!gap_ok && (it % 10 == 0 || it == max_iters)) {
      const Vector theta = scaled_dual_point(X, y, result.beta, lam);
      result.gap = gap_value(X, y, result.beta, theta, lam);
      result.iterations = it;
      if (result.gap <= gap_stop) gap_ok = true;
    }
    if (gap_ok) {
      result.iterations = it;
      if (move_tol <= 0.0 || move <= move_tol || --refine_left <= 0) {
        const Vector theta = scaled_dual_point(X, y, result.beta, lam);
        result.gap = gap_value(X, y, result.beta, theta, lam);
        result.converged = true;
        return result;
      }
    }
  }
  return result;
}

// deviance ratio recomputed the long way
inline double deviance_ratio(const Matrix& X, const Vector& y, const Vector& beta) {
  double rss = 0.0;
  double tss = 0.0;
  const Vector fitted = X * beta;
  for (Index i = 0; i < y.size(); ++i) {
    const double e = y[i] - fitted[i];
    rss += e * e;
    tss += y[i] * y[i];
  }
  return 1.0 - rss / tss;
}

}  // namespace oracle
