#include "crifem/mesh.hpp"

#include <cmath>
#include <map>
#include <ostream>

namespace crifem {

int Mesh::n_boundary_edges() const {
  int n = 0;
  for (const auto& e : edges)
    if (e.boundary()) ++n;
  return n;
}

Mesh build_uniform_mesh(double xmin, double xmax, double ymin, double ymax, int k) {
  if (!(xmax > xmin) || !(ymax > ymin))
    throw InvalidInputError("build_uniform_mesh: empty rectangle");
  if (k < 0) throw InvalidInputError("build_uniform_mesh: k must be >= 0");

  const double h = std::ldexp(1.0, -k);
  auto cells = [&](double lo, double hi) {
    const double n = (hi - lo) / h;
    const double r = std::round(n);
    if (std::abs(n - r) > 1e-9 * std::max(1.0, r))
      throw InvalidInputError("build_uniform_mesh: extent not an integer multiple of h=2^-k");
    return static_cast<int>(r);
  };
  const int nx = cells(xmin, xmax);
  const int ny = cells(ymin, ymax);

  Mesh m;
  m.h = h;
  m.vertices.reserve(static_cast<std::size_t>(nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      m.vertices.push_back({xmin + i * h, ymin + j * h});
  auto vid = [&](int i, int j) { return j * (nx + 1) + i; };

  // Each cell split by the diagonal from (i,j) to (i+1,j+1); both triangles CCW.
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      m.triangles.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)});
      m.triangles.push_back({vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)});
    }

  // Edge table keyed by the canonical vertex pair.
  std::map<std::pair<int, int>, int> edge_ids;
  const int nt = static_cast<int>(m.triangles.size());
  m.tri_edges.resize(nt);
  m.tri_edge_dir.resize(nt);
  for (int t = 0; t < nt; ++t) {
    for (int l = 0; l < 3; ++l) {
      const int a = m.triangles[t][(l + 1) % 3];
      const int b = m.triangles[t][(l + 2) % 3];
      const auto key = std::minmax(a, b);
      auto [it, inserted] = edge_ids.try_emplace(key, static_cast<int>(m.edges.size()));
      if (inserted) m.edges.push_back({key.first, key.second, -1, -1});
      Edge& e = m.edges[it->second];
      m.tri_edges[t][l] = it->second;
      m.tri_edge_dir[t][l] = (a == e.v0) ? 1 : -1;
      // CCW traversal a->b leaves the triangle on the left of a->b.
      if (a == e.v0)
        e.left = t;
      else
        e.right = t;
    }
  }
  return m;
}

DofMap build_dof_map(const Mesh& m) {
  DofMap d;
  d.n_dofs = 2 * static_cast<int>(m.edges.size());
  return d;
}

void dump_mesh(const Mesh& m, std::ostream& os) {
  os << "vertices " << m.vertices.size() << "\n";
  for (std::size_t i = 0; i < m.vertices.size(); ++i)
    os << "v " << i << " " << m.vertices[i].x << " " << m.vertices[i].y << "\n";
  os << "triangles " << m.triangles.size() << "\n";
  for (std::size_t t = 0; t < m.triangles.size(); ++t)
    os << "t " << t << " " << m.triangles[t][0] << " " << m.triangles[t][1] << " "
       << m.triangles[t][2] << "\n";
  os << "edges " << m.edges.size() << "\n";
  for (std::size_t e = 0; e < m.edges.size(); ++e)
    os << "e " << e << " " << m.edges[e].v0 << " " << m.edges[e].v1 << " " << m.edges[e].left
       << " " << m.edges[e].right << "\n";
}

}  // namespace crifem
