#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>

#include "crifem/geometry.hpp"
#include "crifem/interface.hpp"

namespace crifem {

struct MaterialParams {
  double mu_plus = 1.0;
  double mu_minus = 1.0;
  double lambda_plus = 0.0;
  double lambda_minus = 0.0;

  static MaterialParams from_young_poisson(double E_plus, double nu_plus, double E_minus,
                                           double nu_minus);
  static MaterialParams from_shear_poisson(double mu_plus, double nu_plus, double mu_minus,
                                           double nu_minus);

  double mu(int side) const { return side >= 0 ? mu_plus : mu_minus; }
  double lambda(int side) const { return side >= 0 ? lambda_plus : lambda_minus; }
  void validate() const;
};

/// Vector-valued linear field: component c is a_c + b_c*x + c_c*y.
struct LinearPiece {
  double a1 = 0, b1 = 0, c1 = 0;
  double a2 = 0, b2 = 0, c2 = 0;

  Eigen::Vector2d eval(Point p) const {
    return {a1 + b1 * p.x + c1 * p.y, a2 + b2 * p.x + c2 * p.y};
  }
  Eigen::Matrix2d grad() const {  // row i = gradient of component i
    Eigen::Matrix2d g;
    g << b1, c1, b2, c2;
    return g;
  }
  double div() const { return b1 + c2; }
};

inline LinearPiece operator*(double s, const LinearPiece& p) {
  return {s * p.a1, s * p.b1, s * p.c1, s * p.a2, s * p.b2, s * p.c2};
}
inline LinearPiece operator+(const LinearPiece& u, const LinearPiece& v) {
  return {u.a1 + v.a1, u.b1 + v.b1, u.c1 + v.c1, u.a2 + v.a2, u.b2 + v.b2, u.c2 + v.c2};
}

/// One local basis function: a single linear field on uncut elements, two
/// pieces glued along the chord D-E on interface elements.
struct ShapeFunction {
  LinearPiece plus, minus;  // identical when !split
  bool split = false;

  const LinearPiece& piece(int side) const { return side >= 0 ? plus : minus; }
  Eigen::Vector2d eval(Point p, int side) const { return piece(side).eval(p); }
};

struct StrainStress {
  Eigen::Matrix2d strain;
  Eigen::Matrix2d stress;
  double div = 0.0;
};

/// strain = (grad v + grad v^T)/2, stress = 2 mu strain + lambda tr(strain) I,
/// both constant for a linear field.
StrainStress strain_stress(const LinearPiece& piece, int side, const MaterialParams& mat);

/// Standard vector Crouzeix-Raviart basis, edge-average duality
/// avg(phi_i, comp c)|_{edge j} = delta. Basis 0..2 carry component 0 with
/// scalar factor 1 - 2*(barycentric coordinate opposite edge j), 3..5 carry
/// component 1. Throws InvalidInputError for a degenerate triangle.
std::array<ShapeFunction, 6> cr_basis(const std::array<Point, 3>& tri);

/// Condition matrix of the broken basis and the 6 canonical right-hand sides.
/// Row order: component-0 edge averages (3), component-1 edge averages (3),
/// point continuity at D then E (2+2), traction continuity across D-E (2).
/// Column order: [a1+ b1+ c1+ a1- b1- c1- a2+ b2+ c2+ a2- b2- c2-].
/// Averages over cut edges are split at the cut point and integrated piecewise.
struct LocalSystem {
  Eigen::Matrix<double, 12, 12> M;
  Eigen::Matrix<double, 12, 6> rhs;
};
LocalSystem local_system_matrix(const std::array<Point, 3>& tri, const CutInfo& cut,
                                const MaterialParams& mat);

/// Broken basis of an interface element: solves the 12x12 system (rows
/// equilibrated, elimination with partial pivoting). A singular system is a
/// bug by construction and surfaces as ConstructionError with the element id.
std::array<ShapeFunction, 6> broken_basis(const std::array<Point, 3>& tri, const CutInfo& cut,
                                          const MaterialParams& mat);

std::array<ShapeFunction, 6> element_basis(const std::array<Point, 3>& tri,
                                           const ElementClass& cls, const MaterialParams& mat);

using Matrix6 = Eigen::Matrix<double, 6, 6>;
using Vector6 = Eigen::Matrix<double, 6, 1>;

/// K[i][j] = sum over pieces of area * (2 mu eps_i:eps_j + lambda div_i div_j);
/// exact, the integrands are piecewise constant.
Matrix6 local_stiffness(const std::array<Point, 3>& tri, const ElementClass& cls,
                        const MaterialParams& mat, const std::array<ShapeFunction, 6>& basis);

/// Load vector via the degree-2 triangle rule on fan-triangulated pieces.
Vector6 local_load(const std::array<Point, 3>& tri, const ElementClass& cls,
                   const std::function<Eigen::Vector2d(Point)>& f,
                   const std::array<ShapeFunction, 6>& basis);

}  // namespace crifem
