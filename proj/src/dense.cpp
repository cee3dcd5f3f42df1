#include "crifem/dense.hpp"

#include <cmath>

namespace crifem {

namespace {

// Returns the permutation sign, eliminating in place. pivot_floor <= 0 keeps
// going through exact zeros (for determinants).
int eliminate(Eigen::MatrixXd& A, Eigen::MatrixXd* B, double pivot_floor) {
  const int n = static_cast<int>(A.rows());
  int sign = 1;
  for (int k = 0; k < n; ++k) {
    int piv = k;
    double best = std::abs(A(k, k));
    for (int i = k + 1; i < n; ++i)
      if (std::abs(A(i, k)) > best) {
        best = std::abs(A(i, k));
        piv = i;
      }
    if (best <= pivot_floor)
      throw SingularMatrixError("gauss_solve: matrix singular to working precision (pivot " +
                                std::to_string(best) + ")");
    if (piv != k) {
      A.row(piv).swap(A.row(k));
      if (B) B->row(piv).swap(B->row(k));
      sign = -sign;
    }
    if (A(k, k) == 0.0) continue;  // determinant path only
    for (int i = k + 1; i < n; ++i) {
      const double m = A(i, k) / A(k, k);
      if (m == 0.0) continue;
      A.row(i).tail(n - k - 1) -= m * A.row(k).tail(n - k - 1);
      A(i, k) = 0.0;
      if (B) B->row(i) -= m * B->row(k);
    }
  }
  return sign;
}

}  // namespace

Eigen::MatrixXd gauss_solve(Eigen::MatrixXd A, Eigen::MatrixXd B, double pivot_rel_tol) {
  const int n = static_cast<int>(A.rows());
  if (A.cols() != n || B.rows() != n)
    throw InvalidInputError("gauss_solve: dimension mismatch");
  const double norm_inf = A.cwiseAbs().rowwise().sum().maxCoeff();
  eliminate(A, &B, pivot_rel_tol * std::max(norm_inf, 1e-300));
  Eigen::MatrixXd X(n, B.cols());
  for (int i = n - 1; i >= 0; --i) {
    Eigen::RowVectorXd acc = B.row(i);
    for (int j = i + 1; j < n; ++j) acc -= A(i, j) * X.row(j);
    X.row(i) = acc / A(i, i);
  }
  return X;
}

double gauss_det(Eigen::MatrixXd A) {
  const int n = static_cast<int>(A.rows());
  if (A.cols() != n) throw InvalidInputError("gauss_det: matrix not square");
  int sign = 0;
  try {
    sign = eliminate(A, nullptr, -1.0);
  } catch (const SingularMatrixError&) {
    return 0.0;
  }
  double det = sign;
  for (int k = 0; k < n; ++k) det *= A(k, k);
  return det;
}

}  // namespace crifem
