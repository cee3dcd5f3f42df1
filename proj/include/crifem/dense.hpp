#pragma once

#include <Eigen/Dense>

#include "crifem/errors.hpp"

namespace crifem {

/// Gaussian elimination with partial pivoting, multiple right-hand sides.
/// Throws SingularMatrixError when a pivot falls below
/// pivot_rel_tol * ||A||_inf of the matrix as passed in.
Eigen::MatrixXd gauss_solve(Eigen::MatrixXd A, Eigen::MatrixXd B, double pivot_rel_tol = 1e-13);

/// Determinant via the same elimination (sign * product of pivots).
double gauss_det(Eigen::MatrixXd A);

}  // namespace crifem
