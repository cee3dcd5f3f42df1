#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "crifem/elements.hpp"
#include "crifem/geometry.hpp"
#include "crifem/interface.hpp"

namespace crifem::testsupport {

/// 12x12 condition matrix for the unit reference triangle cut at D=(x,0) on
/// the bottom edge and E=(0,y) on the left edge, written out row by row in
/// closed form with the block layout [[A 0]; [d1 d2]; [0 A]; [e1 e2]] and the
/// chord normal n = (y, x)/sqrt(x^2+y^2). Independent of the production
/// assembly of the same system; used for determinant-sign checks.
inline Eigen::Matrix<double, 12, 12> reference_cut_matrix(double x, double y,
                                                          const MaterialParams& mat) {
  const double n1 = y / std::hypot(x, y);
  const double n2 = x / std::hypot(x, y);
  const double mp = mat.mu_plus, mm = mat.mu_minus;
  const double lp = mat.lambda_plus, lm = mat.lambda_minus;

  Eigen::Matrix<double, 5, 6> A;
  A << 1, 0.5, 0.5, 0, 0, 0,                                  //
      1 - y, 0, 0.5 * (1 - y * y), y, 0, 0.5 * y * y,         //
      1 - x, 0.5 * (1 - x * x), 0, x, 0.5 * x * x, 0,         //
      -1, -x, 0, 1, x, 0,                                     //
      -1, 0, -y, 1, 0, y;
  Eigen::Matrix<double, 1, 6> d1, d2, e1, e2;
  d1 << 0, (2 * mp + lp) * n1, mp * n2, 0, -(2 * mm + lm) * n1, -mm * n2;
  d2 << 0, mp * n2, lp * n1, 0, -mm * n2, -lm * n1;
  e1 << 0, lp * n2, mp * n1, 0, -lm * n2, -mm * n1;
  e2 << 0, mp * n1, (2 * mp + lp) * n2, 0, -mm * n1, -(2 * mm + lm) * n2;

  Eigen::Matrix<double, 12, 12> M = Eigen::Matrix<double, 12, 12>::Zero();
  M.block<5, 6>(0, 0) = A;
  M.block<1, 6>(5, 0) = d1;
  M.block<1, 6>(5, 6) = d2;
  M.block<5, 6>(6, 6) = A;
  M.block<1, 6>(11, 0) = e1;
  M.block<1, 6>(11, 6) = e2;
  return M;
}

/// Closed-form expansion of det(reference_cut_matrix), obtained by the
/// column-addition/elimination route: (x d66 * x e66 - 4 x e16 * cofac)/16.
/// Agrees with the matrix determinant to roundoff; positive for every
/// admissible cut and material pair.
inline double reference_cut_det_formula(double x, double y, const MaterialParams& mat) {
  const double n1 = y / std::hypot(x, y);
  const double n2 = x / std::hypot(x, y);
  const double mp = mat.mu_plus, mm = mat.mu_minus;
  const double lp = mat.lambda_plus, lm = mat.lambda_minus;
  const double xy = x * y, co = 1.0 - xy;
  const double xd66 = -n1 * y * ((2 * mp + lp) * xy + (2 * mm + lm) * co) -
                      x * n2 * (mp * xy + mm * co);
  const double xe16 = -n2 * y * (lp * xy + lm * co) - n1 * x * (mp * xy + mm * co);
  const double xe66 = -y * n1 * (mp * xy + mm * co) -
                      x * n2 * ((2 * mm + lm) * co + (2 * mp + lp) * xy);
  const double cofac = -0.25 * ((mp - mm) * n2 * x * y * y + (lp - lm) * n1 * x * x * y +
                                x * lm * n1 + y * mm * n2);
  return (xd66 * xe66 - 4.0 * xe16 * cofac) / 16.0;
}

/// CutInfo for the reference triangle (0,0),(1,0),(0,1) cut at D=(x,0),
/// E=(0,y); the corner at the origin is the minus piece.
inline CutInfo reference_cut(double x, double y) {
  CutInfo cut;
  cut.element = 0;
  cut.D = {x, 0.0};
  cut.E = {0.0, y};
  cut.edge_D = 2;  // bottom edge (between local vertices 0 and 1)
  cut.edge_E = 1;  // left edge (between local vertices 2 and 0)
  cut.minus_poly.vertices = {{0, 0}, {x, 0}, {0, y}};
  cut.plus_poly.vertices = {{x, 0}, {1, 0}, {0, 1}, {0, y}};
  const double len = std::hypot(x, y);
  cut.normal = {y / len, x / len};
  cut.edge_cut_t[2] = x;  // canonical: (0,0)->(1,0)
  cut.edge_cut_t[1] = y;  // canonical: (0,0)->(0,1)
  return cut;
}

}  // namespace crifem::testsupport
