#include "crifem/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>

#include "crifem/parallel.hpp"

namespace crifem {

Eigen::VectorXd GlobalSystem::multiply(const Eigen::VectorXd& x, int threads) const {
  Eigen::VectorXd y(n);
  // Row-wise products: each entry is accumulated by exactly one task, so the
  // result does not depend on the thread count.
  parallel_for(n, threads, [&](int r) {
    double acc = 0.0;
    for (int k = row_ptr[r]; k < row_ptr[r + 1]; ++k) acc += vals[k] * x[cols[k]];
    y[r] = acc;
  });
  return y;
}

Eigen::MatrixXd GlobalSystem::dense() const {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (int r = 0; r < n; ++r)
    for (int k = row_ptr[r]; k < row_ptr[r + 1]; ++k) A(r, cols[k]) += vals[k];
  return A;
}

double GlobalSystem::symmetry_error() const {
  const Eigen::MatrixXd A = dense();
  const double denom = A.cwiseAbs().rowwise().sum().maxCoeff();
  return (A - A.transpose()).cwiseAbs().rowwise().sum().maxCoeff() / std::max(denom, 1e-300);
}

namespace {

struct CooEntry {
  int row, col;
  double val;
};

// Upper-triangle COO (row <= col) -> full symmetric CSR. Duplicates are
// summed in sorted order, deterministically for a fixed emission sequence;
// the lower triangle is mirrored without materializing a doubled COO.
void finalize_csr(int n, std::vector<CooEntry>& coo, GlobalSystem& sys) {
  std::stable_sort(coo.begin(), coo.end(), [](const CooEntry& a, const CooEntry& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  std::size_t w = 0;
  for (std::size_t i = 0; i < coo.size();) {
    std::size_t j = i;
    double acc = 0.0;
    while (j < coo.size() && coo[j].row == coo[i].row && coo[j].col == coo[i].col)
      acc += coo[j++].val;
    coo[w++] = {coo[i].row, coo[i].col, acc};
    i = j;
  }
  coo.resize(w);

  sys.row_ptr.assign(n + 1, 0);
  for (const auto& e : coo) {
    sys.row_ptr[e.row + 1]++;
    if (e.row != e.col) sys.row_ptr[e.col + 1]++;
  }
  for (int r = 0; r < n; ++r) sys.row_ptr[r + 1] += sys.row_ptr[r];
  sys.cols.resize(sys.row_ptr[n]);
  sys.vals.resize(sys.row_ptr[n]);

  // Mirrored entries of row i all have columns < i, direct entries have
  // columns >= i; placing mirrors first keeps every row sorted by column.
  std::vector<int> cursor(sys.row_ptr.begin(), sys.row_ptr.end() - 1);
  for (const auto& e : coo) {
    if (e.row == e.col) continue;
    const int k = cursor[e.col]++;
    sys.cols[k] = e.row;
    sys.vals[k] = e.val;
  }
  for (const auto& e : coo) {
    const int k = cursor[e.row]++;
    sys.cols[k] = e.col;
    sys.vals[k] = e.val;
  }
}

// Cut parameter of a mesh edge in canonical direction, if any, read from the
// adjacent interface elements.
std::optional<double> edge_cut_param(const Mesh& mesh, const std::vector<ElementClass>& classes,
                                     int edge) {
  for (const int t : {mesh.edges[edge].left, mesh.edges[edge].right}) {
    if (t < 0) continue;
    if (!classes[t].is_interface()) continue;
    const int l = mesh.local_edge_index(t, edge);
    if (const auto& tc = classes[t].cut->edge_cut_t[l]) return tc;
  }
  return std::nullopt;
}

int side_in_element(const ElementClass& cls, Point p) {
  return cls.is_interface() ? cls.cut->side_of(p) : cls.side;
}

}  // namespace

Eigen::Vector2d edge_average(const Mesh& mesh, const std::vector<ElementClass>& classes, int edge,
                             const std::function<Eigen::Vector2d(Point)>& g, int quad_degree) {
  const auto [P, Q] = mesh.edge_points(edge);
  const SegmentRule& rule = segment_rule(quad_degree);
  const auto cut = edge_cut_param(mesh, classes, edge);
  double splits[3] = {0.0, 1.0, 1.0};
  int nseg = 1;
  if (cut) {
    splits[1] = *cut;
    splits[2] = 1.0;
    nseg = 2;
  }
  Eigen::Vector2d acc = Eigen::Vector2d::Zero();
  for (int s = 0; s < nseg; ++s) {
    const double ta = splits[s], tb = splits[s + 1];
    for (std::size_t q = 0; q < rule.weights.size(); ++q) {
      const double t = ta + rule.points[q] * (tb - ta);
      acc += rule.weights[q] * (tb - ta) * g(lerp(P, Q, t));
    }
  }
  return acc;  // weights sum to 1 per unit parameter, so this is the average
}

GlobalSystem assemble(const Mesh& mesh, const std::vector<ElementClass>& classes,
                      const MaterialParams& mat, const std::function<Eigen::Vector2d(Point)>& f,
                      const StabilizationConfig& stab, int threads) {
  if (!(stab.tau >= 0.0)) throw InvalidInputError("assemble: tau must be nonnegative");
  const int nt = static_cast<int>(mesh.triangles.size());
  const int ne = static_cast<int>(mesh.edges.size());
  const DofMap dofs = build_dof_map(mesh);

  GlobalSystem sys;
  sys.n = dofs.n_dofs;
  sys.rhs = Eigen::VectorXd::Zero(sys.n);

  // Per-element bases and local matrices, computed in parallel, scattered
  // serially in element order.
  std::vector<std::array<ShapeFunction, 6>> bases(nt);
  std::vector<Matrix6> Ks(nt);
  std::vector<Vector6> Fs(nt);
  std::exception_ptr err;
  std::mutex err_mutex;
  parallel_for(nt, threads, [&](int t) {
    try {
      const auto tri = mesh.tri_points(t);
      bases[t] = element_basis(tri, classes[t], mat);
      Ks[t] = local_stiffness(tri, classes[t], mat, bases[t]);
      Fs[t] = local_load(tri, classes[t], f, bases[t]);
    } catch (...) {
      std::scoped_lock lock(err_mutex);
      if (!err) err = std::current_exception();
    }
  });
  if (err) std::rethrow_exception(err);

  std::vector<CooEntry> coo;
  coo.reserve(static_cast<std::size_t>(nt) * 21 + static_cast<std::size_t>(ne) * 78);
  for (int t = 0; t < nt; ++t) {
    const auto gids = dofs.element_dofs(mesh, t);
    for (int i = 0; i < 6; ++i) {
      sys.rhs[gids[i]] += Fs[t](i);
      for (int j = i; j < 6; ++j) {
        const int r = std::min(gids[i], gids[j]);
        const int c = std::max(gids[i], gids[j]);
        coo.push_back({r, c, Ks[t](i, j)});
      }
    }
  }

  // Jump penalty (tau/h) int_e [u].[v] over the configured edge set. Signs are
  // folded into the trace vectors: +trace from the left element, -trace from
  // the right, in canonical edge orientation.
  if (stab.tau > 0.0) {
    struct EdgeBlock {
      int nloc = 0;
      std::array<int, 12> gid{};
      Eigen::Matrix<double, 12, 12> B;
    };
    std::vector<EdgeBlock> blocks(ne);
    const SegmentRule& rule = segment_rule(3);
    std::exception_ptr stab_err;
    parallel_for(ne, threads, [&](int e) {
      try {
        const Edge& ed = mesh.edges[e];
        if (ed.boundary() && stab.edge_set == StabilizationConfig::EdgeSet::interior) return;
        EdgeBlock& blk = blocks[e];
        const int elems[2] = {ed.left, ed.right};
        for (int s = 0; s < 2; ++s) {
          if (elems[s] < 0) continue;
          const auto g = dofs.element_dofs(mesh, elems[s]);
          for (int i = 0; i < 6; ++i) blk.gid[blk.nloc + i] = g[i];
          blk.nloc += 6;
        }
        blk.B.setZero();
        const auto [P, Q] = mesh.edge_points(e);
        const double len = dist(P, Q);
        const auto cut = edge_cut_param(mesh, classes, e);
        double splits[3] = {0.0, 1.0, 1.0};
        int nseg = 1;
        if (cut) {
          splits[1] = *cut;
          nseg = 2;
        }
        const double scale = stab.tau / mesh.h;
        for (int s = 0; s < nseg; ++s) {
          const double ta = splits[s], tb = splits[s + 1];
          for (std::size_t q = 0; q < rule.weights.size(); ++q) {
            const Point p = lerp(P, Q, ta + rule.points[q] * (tb - ta));
            const double w = scale * rule.weights[q] * (tb - ta) * len;
            Eigen::Vector2d tr[12];
            int a = 0;
            for (int s2 = 0; s2 < 2; ++s2) {
              if (elems[s2] < 0) continue;
              const int t = elems[s2];
              const int side = side_in_element(classes[t], p);
              const double sgn = s2 == 0 ? 1.0 : -1.0;
              for (int i = 0; i < 6; ++i) tr[a++] = sgn * bases[t][i].eval(p, side);
            }
            for (int i = 0; i < blk.nloc; ++i)
              for (int j = i; j < blk.nloc; ++j) blk.B(i, j) += w * tr[i].dot(tr[j]);
          }
        }
      } catch (...) {
        std::scoped_lock lock(err_mutex);
        if (!stab_err) stab_err = std::current_exception();
      }
    });
    if (stab_err) std::rethrow_exception(stab_err);

    for (int e = 0; e < ne; ++e) {
      const EdgeBlock& blk = blocks[e];
      for (int i = 0; i < blk.nloc; ++i)
        for (int j = i; j < blk.nloc; ++j) {
          const int gi = blk.gid[i], gj = blk.gid[j];
          if (gi == gj) {
            // distinct locals sharing a global index contribute twice to the
            // quadratic form's diagonal
            coo.push_back({gi, gi, (i == j ? 1.0 : 2.0) * blk.B(i, j)});
          } else {
            coo.push_back({std::min(gi, gj), std::max(gi, gj), blk.B(i, j)});
          }
        }
    }
  }

  finalize_csr(sys.n, coo, sys);
  return sys;
}

GlobalSystem apply_dirichlet(const GlobalSystem& sys, const Mesh& mesh,
                             const std::vector<ElementClass>& classes,
                             const std::function<Eigen::Vector2d(Point)>& g) {
  GlobalSystem out = sys;
  std::vector<char> constrained(sys.n, 0);
  std::vector<double> value(sys.n, 0.0);
  out.dirichlet_dofs.clear();
  out.dirichlet_values.clear();
  for (int e = 0; e < static_cast<int>(mesh.edges.size()); ++e) {
    if (!mesh.edges[e].boundary()) continue;
    const Eigen::Vector2d avg = edge_average(mesh, classes, e, g);
    for (int c = 0; c < 2; ++c) {
      const int dof = 2 * e + c;
      constrained[dof] = 1;
      value[dof] = avg[c];
      out.dirichlet_dofs.push_back(dof);
      out.dirichlet_values.push_back(avg[c]);
    }
  }

  // Move known columns to the right-hand side, then blank constrained
  // rows/columns symmetrically with a unit diagonal.
  for (int r = 0; r < out.n; ++r) {
    if (constrained[r]) continue;
    for (int k = out.row_ptr[r]; k < out.row_ptr[r + 1]; ++k)
      if (constrained[out.cols[k]]) out.rhs[r] -= out.vals[k] * value[out.cols[k]];
  }
  for (int r = 0; r < out.n; ++r) {
    const bool rc = constrained[r];
    if (rc) out.rhs[r] = value[r];
    for (int k = out.row_ptr[r]; k < out.row_ptr[r + 1]; ++k) {
      const bool cc = constrained[out.cols[k]];
      if (!rc && !cc) continue;
      out.vals[k] = (r == out.cols[k]) ? 1.0 : 0.0;
    }
  }
  return out;
}

}  // namespace crifem
