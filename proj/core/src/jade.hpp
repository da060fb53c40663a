#pragma once

#include <Eigen/Dense>

namespace ippg::detail {

// JADE unmixing matrix for zero-mean data X (channels x samples): sources = B * X.
// Whitens via eigendecomposition, estimates fourth-order cumulant matrices and
// jointly diagonalizes them with Jacobi rotations (threshold 1e-8, 100 sweeps max).
// Throws std::runtime_error on a rank-deficient covariance.
Eigen::MatrixXd jade_unmixing(const Eigen::MatrixXd& x);

}  // namespace ippg::detail
