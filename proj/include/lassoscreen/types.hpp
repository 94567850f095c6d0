#pragma once

#include <Eigen/Core>
#include <stdexcept>

namespace lassoscreen {

using Matrix = Eigen::MatrixXd;  // dense, column-major
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Every column of the design was constant, so nothing is left to fit.
struct EmptyDesignError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The centered response carries no signal (max_j |x_j'y| = 0), which makes
/// the penalty grid undefined.
struct DegenerateResponseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace lassoscreen
