#pragma once

#include <Eigen/Dense>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "crifem/assembly.hpp"
#include "crifem/elements.hpp"
#include "crifem/interface.hpp"
#include "crifem/mesh.hpp"

namespace crifem {

/// Exact solution data. All callables branch internally on the *true*
/// level-set sign, so u is continuous across the interface while grad/div
/// switch material branches there.
struct ManufacturedSolution {
  bool has_exact = true;
  std::function<Eigen::Vector2d(Point)> u;
  std::function<Eigen::Matrix2d(Point)> grad;  // row i = gradient of component i
  std::function<double(Point)> div;
  std::function<Eigen::Vector2d(Point)> f;
};

/// u = (1/mu_s) L(x,y) * (x, y) for the circle and ellipse level sets; the
/// continuous-traction construction requires lambda = c*mu with the same c on
/// both sides.
ManufacturedSolution make_radial_solution(const LevelSet& ls, const MaterialParams& mat);

/// Piecewise-linear patch solution u = (a_s x + k_s, 0) across the vertical
/// line interface, with a+ = (2mu- + lambda-)/(2mu+ + lambda+) and constants
/// fixed by continuity; f = 0.
ManufacturedSolution make_piecewise_linear_solution(const LevelSet& ls, const MaterialParams& mat);

/// Body force of the fixed-force benchmark (no exact solution):
/// F = (-11/4 - (lambda/mu) x, -29/4 - (lambda/mu) y), side-dependent ratio.
ManufacturedSolution make_fixed_force_only(const LevelSet& ls, const MaterialParams& mat);

/// Edge-average interpolant: DOF (e, c) = (1/|e|) int_e u_c ds, integrated
/// with the 3-point Gauss rule split at cut points.
Eigen::VectorXd interpolate(const Mesh& mesh, const std::vector<ElementClass>& classes,
                            const MaterialParams& mat, const std::function<Eigen::Vector2d(Point)>& u);

struct ErrorReport {
  int inv_h = 0;
  double l2 = 0.0;
  double h1 = 0.0;       // full broken H1 norm (L2 part + seminorm)
  double h1_semi = 0.0;  // broken H1 seminorm alone
  double div = 0.0;
  double energy = std::numeric_limits<double>::quiet_NaN();  // set when requested
  // orders vs the previous refinement level, NaN when undefined
  double l2_order = std::numeric_limits<double>::quiet_NaN();
  double h1_order = std::numeric_limits<double>::quiet_NaN();
  double h1_semi_order = std::numeric_limits<double>::quiet_NaN();
  double div_order = std::numeric_limits<double>::quiet_NaN();
};

/// Element-wise error norms with the degree-4 rule on fan-triangulated
/// sub-polygons. The exact branch follows the true level set at each point;
/// the discrete branch follows the chord side of the sub-polygon. Passing a
/// stabilization config adds the energy norm including jump terms.
ErrorReport error_norms(const Mesh& mesh, const std::vector<ElementClass>& classes,
                        const MaterialParams& mat, const LevelSet& ls, const Eigen::VectorXd& uh,
                        const ManufacturedSolution& exact,
                        const StabilizationConfig* energy_stab = nullptr, int threads = 1,
                        int quad_degree = 4);

struct ConvergenceTable {
  std::vector<ErrorReport> rows;
  double tau = 0.0;
  double mu_minus = 1.0, mu_plus = 1.0;
  double lambda_ratio = 0.0;  // lambda-/mu- as recorded for the run
  bool has_exact = true;
};

/// order = log2(e_k / e_{k+1}) per norm between consecutive rows; undefined
/// orders (zero error) stay NaN and print blank.
ConvergenceTable convergence_table(std::vector<ErrorReport> reports);

void export_csv(const ConvergenceTable& table, const std::string& path);
ConvergenceTable read_csv(const std::string& path);

/// Legacy ASCII UNSTRUCTURED_GRID. Cut elements are emitted as their
/// sub-triangles with per-sub-triangle vertex duplication so the
/// discontinuous gradient renders faithfully. Point data: displacement;
/// cell data: material side.
void export_vtk(const Mesh& mesh, const std::vector<ElementClass>& classes,
                const MaterialParams& mat, const Eigen::VectorXd& uh, const std::string& path);

/// u_h restricted to one element, combined into one linear field per side.
struct LocalField {
  LinearPiece plus, minus;
  Eigen::Vector2d eval(Point p, int side) const {
    return (side >= 0 ? plus : minus).eval(p);
  }
};
LocalField local_field(const Mesh& mesh, const std::vector<ElementClass>& classes,
                       const MaterialParams& mat, int element, const Eigen::VectorXd& uh);

}  // namespace crifem
