#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "crifem/elements.hpp"
#include "crifem/interface.hpp"
#include "crifem/mesh.hpp"

namespace crifem {

struct StabilizationConfig {
  enum class EdgeSet { interior, all };
  double tau = 0.0;  // must be > 0 for the stabilized scheme; 0 allowed for oracles
  EdgeSet edge_set = EdgeSet::interior;
};

/// Assembled sparse symmetric system (CSR, full pattern) plus the Dirichlet
/// bookkeeping filled in by apply_dirichlet.
struct GlobalSystem {
  int n = 0;
  std::vector<int> row_ptr;
  std::vector<int> cols;
  std::vector<double> vals;
  Eigen::VectorXd rhs;
  std::vector<int> dirichlet_dofs;
  std::vector<double> dirichlet_values;

  Eigen::VectorXd multiply(const Eigen::VectorXd& x, int threads = 1) const;
  Eigen::MatrixXd dense() const;
  /// ||K - K^T||_inf relative to ||K||_inf.
  double symmetry_error() const;
};

/// Volume terms from local_stiffness/local_load plus the jump penalty
/// (tau/h) int_e [u].[v] ds over the configured edge set. Jumps are taken in
/// the canonical edge orientation; traces of broken functions are integrated
/// piecewise, split at the edge's cut point. The result is independent of the
/// thread count.
GlobalSystem assemble(const Mesh& mesh, const std::vector<ElementClass>& classes,
                      const MaterialParams& mat, const std::function<Eigen::Vector2d(Point)>& f,
                      const StabilizationConfig& stab, int threads = 1);

/// Constrains every boundary (edge, component) DOF to the edge average of g
/// (2-point Gauss, split at cut points) and eliminates rows/columns
/// symmetrically.
GlobalSystem apply_dirichlet(const GlobalSystem& sys, const Mesh& mesh,
                             const std::vector<ElementClass>& classes,
                             const std::function<Eigen::Vector2d(Point)>& g);

/// Edge average of a vector function, one value per component, split at the
/// edge's cut point when the adjacent element is an interface element.
Eigen::Vector2d edge_average(const Mesh& mesh, const std::vector<ElementClass>& classes, int edge,
                             const std::function<Eigen::Vector2d(Point)>& g, int quad_degree = 3);

}  // namespace crifem
