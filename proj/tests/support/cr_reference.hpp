#pragma once

#include <Eigen/Dense>
#include <functional>

#include "crifem/mesh.hpp"

namespace crifem::testsupport {

struct CrReferenceSystem {
  Eigen::MatrixXd K;
  Eigen::VectorXd rhs;
  std::vector<int> constrained;
  std::vector<double> values;
};

/// Plain vector Crouzeix-Raviart elasticity assembly for one material pair
/// (mu, lambda) on the whole domain, with the same (tau/h) edge jump penalty
/// and edge-average Dirichlet data as the production scheme, but built from
/// closed-form barycentric evaluations, the edge-midpoint load rule and
/// Simpson edge integration. No interface machinery involved; serves as the
/// independent oracle.
CrReferenceSystem cr_reference_assemble(const Mesh& mesh, double mu, double lambda, double tau,
                                        bool interior_edges_only,
                                        const std::function<Eigen::Vector2d(Point)>& f,
                                        const std::function<Eigen::Vector2d(Point)>& g);

/// LU solve of the constrained reference system (Eigen).
Eigen::VectorXd cr_reference_solve(const CrReferenceSystem& sys);

}  // namespace crifem::testsupport
