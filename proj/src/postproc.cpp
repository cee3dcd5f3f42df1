#include "crifem/postproc.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>

#include "crifem/parallel.hpp"

namespace crifem {

ManufacturedSolution make_radial_solution(const LevelSet& ls, const MaterialParams& mat) {
  if (ls.kind == LevelSet::Kind::line)
    throw InvalidInputError("make_radial_solution: needs a circle or ellipse level set");
  ManufacturedSolution sol;
  auto mu = [ls, mat](Point p) { return ls.value(p) >= 0 ? mat.mu_plus : mat.mu_minus; };
  auto ratio = [ls, mat](Point p) {
    return ls.value(p) >= 0 ? mat.lambda_plus / mat.mu_plus : mat.lambda_minus / mat.mu_minus;
  };
  sol.u = [ls, mu](Point p) -> Eigen::Vector2d {
    const double w = ls.value(p) / mu(p);
    return {w * p.x, w * p.y};
  };
  sol.grad = [ls, mu](Point p) -> Eigen::Matrix2d {
    const double im = 1.0 / mu(p);
    const double L = ls.value(p);
    const Point g = ls.gradient(p);
    Eigen::Matrix2d J;
    J << im * (L + p.x * g.x), im * (p.x * g.y), im * (p.y * g.x), im * (L + p.y * g.y);
    return J;
  };
  sol.div = [ls, mu](Point p) {
    const Point g = ls.gradient(p);
    return (2.0 * ls.value(p) + p.x * g.x + p.y * g.y) / mu(p);
  };
  if (ls.kind == LevelSet::Kind::circle) {
    sol.f = [ratio](Point p) -> Eigen::Vector2d {
      const double c = ratio(p);
      return {-(16.0 + 8.0 * c) * p.x, -(16.0 + 8.0 * c) * p.y};
    };
  } else {
    sol.f = [ratio](Point p) -> Eigen::Vector2d {
      const double c = ratio(p);
      return {-(5.5 + 2.0 * c) * p.x, -(14.5 + 8.0 * c) * p.y};
    };
  }
  return sol;
}

ManufacturedSolution make_piecewise_linear_solution(const LevelSet& ls,
                                                    const MaterialParams& mat) {
  if (ls.kind != LevelSet::Kind::line)
    throw InvalidInputError("make_piecewise_linear_solution: needs a line level set");
  const double gamma = ls.line_x;
  const double a_minus = 1.0;
  const double a_plus = (2.0 * mat.mu_minus + mat.lambda_minus) /
                        (2.0 * mat.mu_plus + mat.lambda_plus) * a_minus;
  const double k_minus = 0.0;
  const double k_plus = gamma * (a_minus - a_plus);
  auto coeffs = [=](Point p) {
    return ls.value(p) >= 0 ? std::pair{a_plus, k_plus} : std::pair{a_minus, k_minus};
  };
  ManufacturedSolution sol;
  sol.u = [coeffs](Point p) -> Eigen::Vector2d {
    const auto [a, k] = coeffs(p);
    return {a * p.x + k, 0.0};
  };
  sol.grad = [coeffs](Point p) -> Eigen::Matrix2d {
    Eigen::Matrix2d J = Eigen::Matrix2d::Zero();
    J(0, 0) = coeffs(p).first;
    return J;
  };
  sol.div = [coeffs](Point p) { return coeffs(p).first; };
  sol.f = [](Point) -> Eigen::Vector2d { return Eigen::Vector2d::Zero(); };
  return sol;
}

ManufacturedSolution make_fixed_force_only(const LevelSet& ls, const MaterialParams& mat) {
  ManufacturedSolution sol;
  sol.has_exact = false;
  sol.f = [ls, mat](Point p) -> Eigen::Vector2d {
    const double c =
        ls.value(p) >= 0 ? mat.lambda_plus / mat.mu_plus : mat.lambda_minus / mat.mu_minus;
    return {-11.0 / 4.0 - c * p.x, -29.0 / 4.0 - c * p.y};
  };
  return sol;
}

Eigen::VectorXd interpolate(const Mesh& mesh, const std::vector<ElementClass>& classes,
                            const MaterialParams&, const std::function<Eigen::Vector2d(Point)>& u) {
  const DofMap dofs = build_dof_map(mesh);
  Eigen::VectorXd v(dofs.n_dofs);
  for (int e = 0; e < static_cast<int>(mesh.edges.size()); ++e) {
    const Eigen::Vector2d avg = edge_average(mesh, classes, e, u, 5);
    v[2 * e] = avg[0];
    v[2 * e + 1] = avg[1];
  }
  return v;
}

LocalField local_field(const Mesh& mesh, const std::vector<ElementClass>& classes,
                       const MaterialParams& mat, int element, const Eigen::VectorXd& uh) {
  const auto basis = element_basis(mesh.tri_points(element), classes[element], mat);
  const auto gids = build_dof_map(mesh).element_dofs(mesh, element);
  LocalField field;
  for (int i = 0; i < 6; ++i) {
    field.plus = field.plus + uh[gids[i]] * basis[i].plus;
    field.minus = field.minus + uh[gids[i]] * basis[i].minus;
  }
  return field;
}

namespace {

// (polygon, chord side) pairs covering the element
std::vector<std::pair<Polygon, int>> element_regions(const std::array<Point, 3>& tri,
                                                     const ElementClass& cls) {
  if (cls.is_interface())
    return {{cls.cut->plus_poly, +1}, {cls.cut->minus_poly, -1}};
  return {{Polygon{{tri[0], tri[1], tri[2]}}, cls.side}};
}

}  // namespace

ErrorReport error_norms(const Mesh& mesh, const std::vector<ElementClass>& classes,
                        const MaterialParams& mat, const LevelSet& ls, const Eigen::VectorXd& uh,
                        const ManufacturedSolution& exact, const StabilizationConfig* energy_stab,
                        int threads, int quad_degree) {
  if (!exact.has_exact)
    throw InvalidInputError("error_norms: manufactured solution has no exact fields");
  const int nt = static_cast<int>(mesh.triangles.size());
  const TriangleRule& rule = triangle_rule(quad_degree);

  struct Partial {
    double l2 = 0, semi = 0, div = 0, energy = 0;
  };
  std::vector<Partial> parts(nt);
  std::exception_ptr err;
  std::mutex err_mutex;
  parallel_for(nt, threads, [&](int t) {
    try {
      const auto tri = mesh.tri_points(t);
      const LocalField field = local_field(mesh, classes, mat, t, uh);
      const auto regions = element_regions(tri, classes[t]);
      Partial acc;
      for (const auto& [poly, side] : regions) {
        const LinearPiece& piece = side >= 0 ? field.plus : field.minus;
        const Eigen::Matrix2d gh = piece.grad();
        const Eigen::Matrix2d eh = 0.5 * (gh + gh.transpose());
        const double dh = piece.div();
        for (const auto& sub : fan_triangulate(poly)) {
          const double jac = 2.0 * std::abs(triangle_area(sub));
          for (std::size_t q = 0; q < rule.weights.size(); ++q) {
            const Point p = bary_point(sub, rule.points[q]);
            const double w = rule.weights[q] * jac;
            const Eigen::Vector2d du = exact.u(p) - piece.eval(p);
            const Eigen::Matrix2d dg = exact.grad(p) - gh;
            const double dd = exact.div(p) - dh;
            acc.l2 += w * du.squaredNorm();
            acc.semi += w * dg.squaredNorm();
            acc.div += w * dd * dd;
            if (energy_stab) {
              const int true_side = ls.value(p) >= 0 ? 1 : -1;
              const Eigen::Matrix2d ee = 0.5 * (exact.grad(p) + exact.grad(p).transpose()) - eh;
              acc.energy += w * (2.0 * mat.mu(true_side) * ee.squaredNorm() +
                                 mat.lambda(true_side) * dd * dd);
            }
          }
        }
      }
      parts[t] = acc;
    } catch (...) {
      std::scoped_lock lock(err_mutex);
      if (!err) err = std::current_exception();
    }
  });
  if (err) std::rethrow_exception(err);

  ErrorReport rep;
  double l2 = 0, semi = 0, divn = 0, energy = 0;
  for (const auto& p : parts) {
    l2 += p.l2;
    semi += p.semi;
    divn += p.div;
    energy += p.energy;
  }

  // jump part of the energy norm: [u - u_h] = -[u_h] since u is continuous
  if (energy_stab && energy_stab->tau > 0.0) {
    const SegmentRule& srule = segment_rule(3);
    for (int e = 0; e < static_cast<int>(mesh.edges.size()); ++e) {
      const Edge& ed = mesh.edges[e];
      if (ed.boundary() && energy_stab->edge_set == StabilizationConfig::EdgeSet::interior)
        continue;
      const auto [P, Q] = mesh.edge_points(e);
      const double len = dist(P, Q);
      const int adj[2] = {ed.left, ed.right};
      LocalField fields[2];
      for (int s = 0; s < 2; ++s)
        if (adj[s] >= 0) fields[s] = local_field(mesh, classes, mat, adj[s], uh);
      auto side_in = [&](int t, Point p) {
        return classes[t].is_interface() ? classes[t].cut->side_of(p) : classes[t].side;
      };
      double splits[3] = {0.0, 1.0, 1.0};
      int nseg = 1;
      for (const int t : adj) {
        if (t < 0 || !classes[t].is_interface()) continue;
        const int l = mesh.local_edge_index(t, e);
        if (const auto& tc = classes[t].cut->edge_cut_t[l]) {
          splits[1] = *tc;
          nseg = 2;
          break;
        }
      }
      for (int s = 0; s < nseg; ++s) {
        const double ta = splits[s], tb = splits[s + 1];
        for (std::size_t q = 0; q < srule.weights.size(); ++q) {
          const Point p = lerp(P, Q, ta + srule.points[q] * (tb - ta));
          Eigen::Vector2d jump = Eigen::Vector2d::Zero();
          for (int s2 = 0; s2 < 2; ++s2) {
            if (adj[s2] < 0) continue;
            const double sgn = s2 == 0 ? 1.0 : -1.0;
            jump += sgn * fields[s2].eval(p, side_in(adj[s2], p));
          }
          energy += energy_stab->tau / mesh.h * srule.weights[q] * (tb - ta) * len *
                    jump.squaredNorm();
        }
      }
    }
  }

  rep.inv_h = static_cast<int>(std::lround(1.0 / mesh.h));
  rep.l2 = std::sqrt(l2);
  rep.h1_semi = std::sqrt(semi);
  rep.h1 = std::sqrt(l2 + semi);
  rep.div = std::sqrt(divn);
  rep.energy = energy_stab ? std::sqrt(energy) : std::numeric_limits<double>::quiet_NaN();
  return rep;
}

ConvergenceTable convergence_table(std::vector<ErrorReport> reports) {
  ConvergenceTable t;
  t.rows = std::move(reports);
  for (std::size_t i = 1; i < t.rows.size(); ++i) {
    const ErrorReport& a = t.rows[i - 1];
    ErrorReport& b = t.rows[i];
    const double steps = std::log2(static_cast<double>(b.inv_h) / a.inv_h);
    auto order = [steps](double ea, double eb) {
      if (!(ea > 0) || !(eb > 0) || steps <= 0) return std::numeric_limits<double>::quiet_NaN();
      return std::log2(ea / eb) / steps;
    };
    b.l2_order = order(a.l2, b.l2);
    b.h1_order = order(a.h1, b.h1);
    b.h1_semi_order = order(a.h1_semi, b.h1_semi);
    b.div_order = order(a.div, b.div);
  }
  return t;
}

namespace {

std::string fmt_field(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_field(const std::string& s) {
  if (s.empty()) return std::numeric_limits<double>::quiet_NaN();
  return std::strtod(s.c_str(), nullptr);
}

}  // namespace

void export_csv(const ConvergenceTable& table, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw IoError("export_csv: cannot open", path);
  os << "inv_h,l2,l2_order,h1,h1_order,div,div_order,tau,mu_minus,mu_plus,lambda_ratio,"
        "h1_semi,h1_semi_order,energy\n";
  for (const auto& r : table.rows) {
    const bool ex = table.has_exact;
    os << r.inv_h << ',' << (ex ? fmt_field(r.l2) : "") << ',' << (ex ? fmt_field(r.l2_order) : "")
       << ',' << (ex ? fmt_field(r.h1) : "") << ',' << (ex ? fmt_field(r.h1_order) : "") << ','
       << (ex ? fmt_field(r.div) : "") << ',' << (ex ? fmt_field(r.div_order) : "") << ','
       << fmt_field(table.tau) << ',' << fmt_field(table.mu_minus) << ','
       << fmt_field(table.mu_plus) << ',' << fmt_field(table.lambda_ratio) << ','
       << (ex ? fmt_field(r.h1_semi) : "") << ',' << (ex ? fmt_field(r.h1_semi_order) : "") << ','
       << fmt_field(r.energy) << '\n';
  }
  if (!os) throw IoError("export_csv: write failed", path);
}

ConvergenceTable read_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("read_csv: cannot open", path);
  std::string line;
  std::getline(is, line);  // header
  ConvergenceTable t;
  t.has_exact = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) fields.push_back(cell);
    fields.resize(14);
    ErrorReport r;
    r.inv_h = static_cast<int>(std::strtol(fields[0].c_str(), nullptr, 10));
    r.l2 = parse_field(fields[1]);
    r.l2_order = parse_field(fields[2]);
    r.h1 = parse_field(fields[3]);
    r.h1_order = parse_field(fields[4]);
    r.div = parse_field(fields[5]);
    r.div_order = parse_field(fields[6]);
    t.tau = parse_field(fields[7]);
    t.mu_minus = parse_field(fields[8]);
    t.mu_plus = parse_field(fields[9]);
    t.lambda_ratio = parse_field(fields[10]);
    r.h1_semi = parse_field(fields[11]);
    r.h1_semi_order = parse_field(fields[12]);
    r.energy = parse_field(fields[13]);
    if (!std::isnan(r.l2)) t.has_exact = true;
    t.rows.push_back(r);
  }
  return t;
}

void export_vtk(const Mesh& mesh, const std::vector<ElementClass>& classes,
                const MaterialParams& mat, const Eigen::VectorXd& uh, const std::string& path) {
  struct Cell {
    std::array<Point, 3> pts;
    std::array<Eigen::Vector2d, 3> disp;
    int side;
  };
  std::vector<Cell> cells;
  for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
    const auto tri = mesh.tri_points(t);
    const LocalField field = local_field(mesh, classes, mat, t, uh);
    for (const auto& [poly, side] : element_regions(tri, classes[t])) {
      for (const auto& sub : fan_triangulate(poly)) {
        Cell c;
        c.pts = sub;
        c.side = side;
        for (int v = 0; v < 3; ++v) c.disp[v] = field.eval(sub[v], side);
        cells.push_back(c);
      }
    }
  }

  std::ofstream os(path);
  if (!os) throw IoError("export_vtk: cannot open", path);
  const std::size_t np = 3 * cells.size();
  os << "# vtk DataFile Version 3.0\n"
     << "displacement field\n"
     << "ASCII\n"
     << "DATASET UNSTRUCTURED_GRID\n"
     << "POINTS " << np << " double\n";
  char buf[128];
  for (const auto& c : cells)
    for (const auto& p : c.pts) {
      std::snprintf(buf, sizeof buf, "%.9g %.9g 0\n", p.x, p.y);
      os << buf;
    }
  os << "CELLS " << cells.size() << " " << 4 * cells.size() << "\n";
  for (std::size_t i = 0; i < cells.size(); ++i)
    os << "3 " << 3 * i << " " << 3 * i + 1 << " " << 3 * i + 2 << "\n";
  os << "CELL_TYPES " << cells.size() << "\n";
  for (std::size_t i = 0; i < cells.size(); ++i) os << "5\n";
  os << "POINT_DATA " << np << "\n"
     << "VECTORS displacement double\n";
  for (const auto& c : cells)
    for (const auto& d : c.disp) {
      std::snprintf(buf, sizeof buf, "%.9g %.9g 0\n", d[0], d[1]);
      os << buf;
    }
  os << "CELL_DATA " << cells.size() << "\n"
     << "SCALARS material_side int 1\n"
     << "LOOKUP_TABLE default\n";
  for (const auto& c : cells) os << c.side << "\n";
  if (!os) throw IoError("export_vtk: write failed", path);
}

}  // namespace crifem
