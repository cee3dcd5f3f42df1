#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "crifem/geometry.hpp"

namespace crifem {

struct Edge {
  int v0 = -1, v1 = -1;  // canonical orientation: v0 < v1
  int left = -1;         // triangle on the left of v0->v1, -1 if none
  int right = -1;        // triangle on the right of v0->v1, -1 if none
  bool boundary() const { return left < 0 || right < 0; }
  int any_adjacent() const { return left >= 0 ? left : right; }
};

/// Uniform right-triangle mesh of a rectangle. Each square cell is split by
/// the lower-left to upper-right diagonal. Immutable after construction.
struct Mesh {
  std::vector<Point> vertices;
  std::vector<std::array<int, 3>> triangles;  // vertex ids, CCW
  std::vector<Edge> edges;
  // tri_edges[t][l] = edge opposite local vertex l, i.e. local edge l runs
  // from vertex (l+1)%3 to (l+2)%3 in the triangle's CCW order.
  std::vector<std::array<int, 3>> tri_edges;
  // +1 when the CCW traversal of local edge l agrees with the canonical
  // v0->v1 direction of the stored edge, else -1.
  std::vector<std::array<int, 3>> tri_edge_dir;
  double h = 0.0;  // cell side length 2^-k

  std::array<Point, 3> tri_points(int t) const {
    return {vertices[triangles[t][0]], vertices[triangles[t][1]], vertices[triangles[t][2]]};
  }
  std::array<Point, 2> edge_points(int e) const {
    return {vertices[edges[e].v0], vertices[edges[e].v1]};
  }
  int local_edge_index(int t, int e) const {
    for (int l = 0; l < 3; ++l)
      if (tri_edges[t][l] == e) return l;
    return -1;
  }
  int n_boundary_edges() const;
};

/// k >= 0 sets the cell size h = 2^-k; the rectangle extents must be integer
/// multiples of h (throws InvalidInputError otherwise).
Mesh build_uniform_mesh(double xmin, double xmax, double ymin, double ymax, int k);

/// Two DOFs per edge, one per displacement component: dof = 2*edge + comp.
struct DofMap {
  int n_dofs = 0;
  int global(int edge, int comp) const { return 2 * edge + comp; }
  /// Six local DOFs per element: locals 0..2 are component 0 on local edges
  /// 0..2, locals 3..5 component 1 on the same edges.
  std::array<int, 6> element_dofs(const Mesh& m, int t) const {
    const auto& e = m.tri_edges[t];
    return {2 * e[0], 2 * e[1], 2 * e[2], 2 * e[0] + 1, 2 * e[1] + 1, 2 * e[2] + 1};
  }
};

DofMap build_dof_map(const Mesh& m);

/// Plain-text dump, one entity per line (debugging aid, not load-bearing).
void dump_mesh(const Mesh& m, std::ostream& os);

}  // namespace crifem
