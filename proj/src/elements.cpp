#include "crifem/elements.hpp"

#include <cmath>

#include "crifem/dense.hpp"

namespace crifem {

MaterialParams MaterialParams::from_young_poisson(double E_plus, double nu_plus, double E_minus,
                                                  double nu_minus) {
  auto lame = [](double E, double nu) {
    if (!(E > 0)) throw InvalidInputError("MaterialParams: Young's modulus must be positive");
    if (!(nu >= 0) || nu >= 0.5)
      throw InvalidInputError("MaterialParams: Poisson ratio must lie in [0, 0.5)");
    return std::pair{E * nu / ((1 + nu) * (1 - 2 * nu)), E / (2 * (1 + nu))};
  };
  const auto [lp, mp] = lame(E_plus, nu_plus);
  const auto [lm, mm] = lame(E_minus, nu_minus);
  MaterialParams mat{mp, mm, lp, lm};
  mat.validate();
  return mat;
}

MaterialParams MaterialParams::from_shear_poisson(double mu_plus, double nu_plus, double mu_minus,
                                                  double nu_minus) {
  // lambda/mu = 2 nu / (1 - 2 nu)
  auto lam = [](double mu, double nu) {
    if (!(nu >= 0) || nu >= 0.5)
      throw InvalidInputError("MaterialParams: Poisson ratio must lie in [0, 0.5)");
    return mu * 2.0 * nu / (1.0 - 2.0 * nu);
  };
  MaterialParams mat{mu_plus, mu_minus, lam(mu_plus, nu_plus), lam(mu_minus, nu_minus)};
  mat.validate();
  return mat;
}

void MaterialParams::validate() const {
  if (!(mu_plus > 0) || !(mu_minus > 0) || !std::isfinite(mu_plus) || !std::isfinite(mu_minus))
    throw InvalidInputError("MaterialParams: shear moduli must be positive and finite");
  if (!(lambda_plus >= 0) || !(lambda_minus >= 0) || !std::isfinite(lambda_plus) ||
      !std::isfinite(lambda_minus))
    throw InvalidInputError("MaterialParams: lambda must be nonnegative and finite");
}

StrainStress strain_stress(const LinearPiece& piece, int side, const MaterialParams& mat) {
  StrainStress s;
  const Eigen::Matrix2d g = piece.grad();
  s.strain = 0.5 * (g + g.transpose());
  s.div = piece.div();
  s.stress = 2.0 * mat.mu(side) * s.strain +
             mat.lambda(side) * s.div * Eigen::Matrix2d::Identity();
  return s;
}

namespace {

struct LinearScalar {
  double a = 0, b = 0, c = 0;
  double eval(Point p) const { return a + b * p.x + c * p.y; }
};

// Barycentric coordinate functions; lambda[j] is 1 at vertex j.
std::array<LinearScalar, 3> barycentric(const std::array<Point, 3>& tri) {
  const double twoA = 2.0 * triangle_area(tri);
  const double diam2 = std::max({dot(tri[1] - tri[0], tri[1] - tri[0]),
                                 dot(tri[2] - tri[1], tri[2] - tri[1]),
                                 dot(tri[0] - tri[2], tri[0] - tri[2])});
  if (std::abs(twoA) <= 1e-14 * diam2)
    throw InvalidInputError("cr_basis: degenerate triangle");
  std::array<LinearScalar, 3> l;
  for (int j = 0; j < 3; ++j) {
    const Point& p = tri[(j + 1) % 3];
    const Point& q = tri[(j + 2) % 3];
    l[j] = {(p.x * q.y - q.x * p.y) / twoA, (p.y - q.y) / twoA, (q.x - p.x) / twoA};
  }
  return l;
}

}  // namespace

std::array<ShapeFunction, 6> cr_basis(const std::array<Point, 3>& tri) {
  const auto lam = barycentric(tri);
  std::array<ShapeFunction, 6> basis;
  for (int j = 0; j < 3; ++j) {
    // scalar CR function for edge j (opposite vertex j)
    const LinearScalar psi{1.0 - 2.0 * lam[j].a, -2.0 * lam[j].b, -2.0 * lam[j].c};
    LinearPiece p1{psi.a, psi.b, psi.c, 0, 0, 0};
    LinearPiece p2{0, 0, 0, psi.a, psi.b, psi.c};
    basis[j] = {p1, p1, false};
    basis[j + 3] = {p2, p2, false};
  }
  return basis;
}

LocalSystem local_system_matrix(const std::array<Point, 3>& tri, const CutInfo& cut,
                                const MaterialParams& mat) {
  LocalSystem sys;
  sys.M.setZero();
  sys.rhs.setZero();
  sys.rhs.topRows<6>().setIdentity();

  // Column offsets per (component, side): +side coefficients first.
  auto col = [](int comp, int side, int term) { return comp * 6 + (side >= 0 ? 0 : 3) + term; };

  // Rows 0..5: piecewise edge averages. The average of a linear function on a
  // segment is its midpoint value, so a cut edge contributes the two midpoint
  // rows weighted by sub-segment fractions.
  for (int l = 0; l < 3; ++l) {
    const Point A = tri[(l + 1) % 3];
    const Point B = tri[(l + 2) % 3];
    const double len = dist(A, B);
    Point pts[3] = {A, B, B};
    int nseg = 1;
    if (cut.edge_D == l) {
      pts[1] = cut.D;
      pts[2] = B;
      nseg = 2;
    } else if (cut.edge_E == l) {
      pts[1] = cut.E;
      pts[2] = B;
      nseg = 2;
    }
    for (int s = 0; s < nseg; ++s) {
      const Point a = pts[s], b = pts[s + 1];
      const double frac = dist(a, b) / len;
      if (frac < 1e-14) continue;
      const Point m = midpoint(a, b);
      const int side = cut.side_of(m);
      for (int comp = 0; comp < 2; ++comp) {
        sys.M(3 * comp + l, col(comp, side, 0)) += frac;
        sys.M(3 * comp + l, col(comp, side, 1)) += frac * m.x;
        sys.M(3 * comp + l, col(comp, side, 2)) += frac * m.y;
      }
    }
  }

  // Rows 6..9: point continuity at D and E, minus piece minus plus piece.
  auto continuity = [&](int row, Point p) {
    for (int comp = 0; comp < 2; ++comp) {
      sys.M(row + comp, col(comp, -1, 0)) = 1.0;
      sys.M(row + comp, col(comp, -1, 1)) = p.x;
      sys.M(row + comp, col(comp, -1, 2)) = p.y;
      sys.M(row + comp, col(comp, +1, 0)) = -1.0;
      sys.M(row + comp, col(comp, +1, 1)) = -p.x;
      sys.M(row + comp, col(comp, +1, 2)) = -p.y;
    }
  };
  continuity(6, cut.D);
  continuity(8, cut.E);

  // Rows 10..11: traction continuity across the chord,
  // [sigma(phi) n]_c = (plus) - (minus) = 0 for both components c.
  const double n1 = cut.normal.x, n2 = cut.normal.y;
  for (const int side : {+1, -1}) {
    const double sgn = side >= 0 ? 1.0 : -1.0;
    const double mu = mat.mu(side), la = mat.lambda(side);
    // (sigma n)_1 = (2mu+la) b1 n1 + mu c1 n2 + mu b2 n2 + la c2 n1
    sys.M(10, col(0, side, 1)) = sgn * (2 * mu + la) * n1;
    sys.M(10, col(0, side, 2)) = sgn * mu * n2;
    sys.M(10, col(1, side, 1)) = sgn * mu * n2;
    sys.M(10, col(1, side, 2)) = sgn * la * n1;
    // (sigma n)_2 = la b1 n2 + mu c1 n1 + mu b2 n1 + (2mu+la) c2 n2
    sys.M(11, col(0, side, 1)) = sgn * la * n2;
    sys.M(11, col(0, side, 2)) = sgn * mu * n1;
    sys.M(11, col(1, side, 1)) = sgn * mu * n1;
    sys.M(11, col(1, side, 2)) = sgn * (2 * mu + la) * n2;
  }
  return sys;
}

std::array<ShapeFunction, 6> broken_basis(const std::array<Point, 3>& tri, const CutInfo& cut,
                                          const MaterialParams& mat) {
  LocalSystem sys = local_system_matrix(tri, cut, mat);

  // Traction rows carry material magnitudes; equilibrate by row inf-norm so
  // the pivot threshold is meaningful across rows.
  Eigen::MatrixXd M = sys.M;
  Eigen::MatrixXd rhs = sys.rhs;
  for (int r = 0; r < 12; ++r) {
    const double s = M.row(r).cwiseAbs().maxCoeff();
    if (s > 0) {
      M.row(r) /= s;
      rhs.row(r) /= s;
    }
  }

  Eigen::MatrixXd X;
  try {
    X = gauss_solve(std::move(M), std::move(rhs), 1e-13);
  } catch (const SingularMatrixError& e) {
    throw ConstructionError(std::string("broken_basis: ") + e.what(), cut.element);
  }

  std::array<ShapeFunction, 6> basis;
  for (int i = 0; i < 6; ++i) {
    ShapeFunction& phi = basis[i];
    phi.split = true;
    phi.plus = {X(0, i), X(1, i), X(2, i), X(6, i), X(7, i), X(8, i)};
    phi.minus = {X(3, i), X(4, i), X(5, i), X(9, i), X(10, i), X(11, i)};
  }
  return basis;
}

std::array<ShapeFunction, 6> element_basis(const std::array<Point, 3>& tri,
                                           const ElementClass& cls, const MaterialParams& mat) {
  return cls.is_interface() ? broken_basis(tri, *cls.cut, mat) : cr_basis(tri);
}

Matrix6 local_stiffness(const std::array<Point, 3>& tri, const ElementClass& cls,
                        const MaterialParams& mat, const std::array<ShapeFunction, 6>& basis) {
  Matrix6 K = Matrix6::Zero();
  auto accumulate = [&](double area, int side) {
    const double mu = mat.mu(side), la = mat.lambda(side);
    StrainStress s[6];
    for (int i = 0; i < 6; ++i) s[i] = strain_stress(basis[i].piece(side), side, mat);
    for (int i = 0; i < 6; ++i)
      for (int j = i; j < 6; ++j) {
        const double v =
            area * (2.0 * mu * (s[i].strain.array() * s[j].strain.array()).sum() +
                    la * s[i].div * s[j].div);
        K(i, j) += v;
        if (i != j) K(j, i) += v;
      }
  };
  if (cls.is_interface()) {
    accumulate(polygon_area(cls.cut->plus_poly), +1);
    accumulate(polygon_area(cls.cut->minus_poly), -1);
  } else {
    accumulate(std::abs(triangle_area(tri)), cls.side);
  }
  return K;
}

Vector6 local_load(const std::array<Point, 3>& tri, const ElementClass& cls,
                   const std::function<Eigen::Vector2d(Point)>& f,
                   const std::array<ShapeFunction, 6>& basis) {
  Vector6 F = Vector6::Zero();
  const TriangleRule& rule = triangle_rule(2);
  auto accumulate = [&](const Polygon& poly, int side) {
    for (const auto& sub : fan_triangulate(poly)) {
      const double jac = 2.0 * std::abs(triangle_area(sub));
      for (std::size_t q = 0; q < rule.weights.size(); ++q) {
        const Point p = bary_point(sub, rule.points[q]);
        const Eigen::Vector2d fv = f(p);
        const double w = rule.weights[q] * jac;
        for (int i = 0; i < 6; ++i) F(i) += w * fv.dot(basis[i].eval(p, side));
      }
    }
  };
  if (cls.is_interface()) {
    accumulate(cls.cut->plus_poly, +1);
    accumulate(cls.cut->minus_poly, -1);
  } else {
    accumulate(Polygon{{tri[0], tri[1], tri[2]}}, cls.side);
  }
  return F;
}

}  // namespace crifem
