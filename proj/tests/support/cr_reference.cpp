#include "support/cr_reference.hpp"

#include <array>
#include <cmath>

namespace crifem::testsupport {

namespace {

double tri_area(const std::array<Point, 3>& t) {
  return 0.5 * ((t[1].x - t[0].x) * (t[2].y - t[0].y) - (t[2].x - t[0].x) * (t[1].y - t[0].y));
}

// lambda_j(p) as an area ratio (independent of the coefficient-based route).
double bary(const std::array<Point, 3>& t, int j, Point p) {
  const std::array<Point, 3> sub = {p, t[(j + 1) % 3], t[(j + 2) % 3]};
  return tri_area(sub) / tri_area(t);
}

double cr_scalar(const std::array<Point, 3>& t, int j, Point p) {
  return 1.0 - 2.0 * bary(t, j, p);
}

// gradient of lambda_j from the vertex coordinates
Point bary_grad(const std::array<Point, 3>& t, int j) {
  const Point& a = t[(j + 1) % 3];
  const Point& b = t[(j + 2) % 3];
  const double twoA = 2.0 * tri_area(t);
  return {(a.y - b.y) / twoA, (b.x - a.x) / twoA};
}

}  // namespace

CrReferenceSystem cr_reference_assemble(const Mesh& mesh, double mu, double lambda, double tau,
                                        bool interior_edges_only,
                                        const std::function<Eigen::Vector2d(Point)>& f,
                                        const std::function<Eigen::Vector2d(Point)>& g) {
  const int n = 2 * static_cast<int>(mesh.edges.size());
  CrReferenceSystem sys;
  sys.K = Eigen::MatrixXd::Zero(n, n);
  sys.rhs = Eigen::VectorXd::Zero(n);

  // volume terms and load
  for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
    const auto tri = mesh.tri_points(t);
    const double A = std::abs(tri_area(tri));
    std::array<int, 6> gid;
    for (int l = 0; l < 3; ++l) {
      gid[l] = 2 * mesh.tri_edges[t][l];
      gid[l + 3] = gid[l] + 1;
    }
    // strains of the six basis functions (constant): grad psi_j = -2 grad lambda_j
    Eigen::Matrix2d eps[6];
    double div[6];
    for (int j = 0; j < 3; ++j) {
      const Point gpsi = -2.0 * bary_grad(tri, j);
      eps[j] << gpsi.x, 0.5 * gpsi.y, 0.5 * gpsi.y, 0.0;
      div[j] = gpsi.x;
      eps[j + 3] << 0.0, 0.5 * gpsi.x, 0.5 * gpsi.x, gpsi.y;
      div[j + 3] = gpsi.y;
    }
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j)
        sys.K(gid[i], gid[j]) +=
            A * (2.0 * mu * (eps[i].array() * eps[j].array()).sum() + lambda * div[i] * div[j]);
    // edge-midpoint rule: psi_j(mid e_i) = delta_ij, so F_i = (A/3) f_c(mid e_i)
    for (int l = 0; l < 3; ++l) {
      const Point m = midpoint(tri[(l + 1) % 3], tri[(l + 2) % 3]);
      const Eigen::Vector2d fv = f(m);
      sys.rhs[gid[l]] += A / 3.0 * fv[0];
      sys.rhs[gid[l + 3]] += A / 3.0 * fv[1];
    }
  }

  // jump penalty via Simpson on each edge (exact for products of linears)
  for (int e = 0; e < static_cast<int>(mesh.edges.size()); ++e) {
    const Edge& ed = mesh.edges[e];
    if (ed.boundary() && interior_edges_only) continue;
    const auto [P, Q] = mesh.edge_points(e);
    const Point M = midpoint(P, Q);
    const double len = dist(P, Q);
    int nloc = 0;
    std::array<int, 12> gid{};
    std::array<std::array<double, 3>, 12> tr{};  // scalar trace at P, M, Q with jump sign
    std::array<int, 12> comp{};
    for (int s = 0; s < 2; ++s) {
      const int t = s == 0 ? ed.left : ed.right;
      if (t < 0) continue;
      const auto tri = mesh.tri_points(t);
      const double sgn = s == 0 ? 1.0 : -1.0;
      for (int j = 0; j < 3; ++j)
        for (int c = 0; c < 2; ++c) {
          gid[nloc] = 2 * mesh.tri_edges[t][j] + c;
          comp[nloc] = c;
          tr[nloc] = {sgn * cr_scalar(tri, j, P), sgn * cr_scalar(tri, j, M),
                      sgn * cr_scalar(tri, j, Q)};
          ++nloc;
        }
    }
    const double scale = tau / mesh.h * len / 6.0;  // Simpson weights 1,4,1 over /6
    for (int a = 0; a < nloc; ++a)
      for (int b = 0; b < nloc; ++b) {
        if (comp[a] != comp[b]) continue;  // components do not couple in [u].[v]
        const double ip =
            tr[a][0] * tr[b][0] + 4.0 * tr[a][1] * tr[b][1] + tr[a][2] * tr[b][2];
        sys.K(gid[a], gid[b]) += scale * ip;
      }
  }

  // Dirichlet: boundary edge averages of g by Simpson, symmetric elimination.
  // No g: leave the system unconstrained (pure stiffness comparison).
  if (!g) return sys;
  std::vector<char> fixed(n, 0);
  std::vector<double> value(n, 0.0);
  for (int e = 0; e < static_cast<int>(mesh.edges.size()); ++e) {
    if (!mesh.edges[e].boundary()) continue;
    const auto [P, Q] = mesh.edge_points(e);
    const Eigen::Vector2d avg = (g(P) + 4.0 * g(midpoint(P, Q)) + g(Q)) / 6.0;
    for (int c = 0; c < 2; ++c) {
      fixed[2 * e + c] = 1;
      value[2 * e + c] = avg[c];
      sys.constrained.push_back(2 * e + c);
      sys.values.push_back(avg[c]);
    }
  }
  for (int r = 0; r < n; ++r) {
    if (fixed[r]) continue;
    for (int c = 0; c < n; ++c)
      if (fixed[c]) {
        sys.rhs[r] -= sys.K(r, c) * value[c];
        sys.K(r, c) = 0.0;
      }
  }
  for (int r = 0; r < n; ++r) {
    if (!fixed[r]) continue;
    sys.K.row(r).setZero();
    sys.K(r, r) = 1.0;
    sys.rhs[r] = value[r];
  }
  return sys;
}

Eigen::VectorXd cr_reference_solve(const CrReferenceSystem& sys) {
  return Eigen::PartialPivLU<Eigen::MatrixXd>(sys.K).solve(sys.rhs);
}

}  // namespace crifem::testsupport
