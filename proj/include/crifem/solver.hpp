#pragma once

#include <Eigen/Dense>
#include <utility>

#include "crifem/assembly.hpp"

namespace crifem {

struct SolveReport {
  int iterations = 0;
  double final_residual = 0.0;  // ||b - K x||_2 / ||b||_2
  double seconds = 0.0;
};

/// Jacobi-preconditioned conjugate gradients, x0 = 0. Converged when the true
/// relative residual reaches tol. Non-positive curvature raises NotSpdError
/// (an assembly bug), running out of iterations raises ConvergenceError with
/// the residual history. maxiter <= 0 picks 2n + 200.
std::pair<Eigen::VectorXd, SolveReport> solve_cg(const GlobalSystem& sys, double tol = 1e-12,
                                                 int maxiter = 0, int threads = 1);

/// Dense elimination with partial pivoting; oracle and fallback for systems
/// of dimension <= 5000.
Eigen::VectorXd solve_dense(const GlobalSystem& sys);

}  // namespace crifem
