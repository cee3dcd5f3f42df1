#pragma once

#include <optional>
#include <vector>

#include "crifem/geometry.hpp"
#include "crifem/mesh.hpp"

namespace crifem {

/// Implicit interface description. Sign convention fixed here once:
/// L > 0 on the plus material side, L < 0 on the minus side.
struct LevelSet {
  enum class Kind { circle, ellipse, line };
  Kind kind = Kind::circle;
  double r0 = 0.0;      // circle: x^2+y^2-r0^2, ellipse: x^2/4+y^2-r0^2
  double line_x = 0.0;  // line: x - line_x

  double value(Point p) const;
  Point gradient(Point p) const;
};

LevelSet make_circle(double r0);
LevelSet make_ellipse(double r0);
LevelSet make_vertical_line(double x0);

/// Per-element cut data. The curved interface is replaced by the chord D-E
/// inside the element; `normal` is the unit normal of that chord oriented
/// from the minus piece into the plus piece.
struct CutInfo {
  int element = -1;
  Point D, E;
  int edge_D = -1, edge_E = -1;  // local edge carrying the point, -1 at a vertex
  Point normal;
  Polygon plus_poly, minus_poly;
  // Interior cut parameter per local edge, in the canonical (v0->v1) direction
  // of the stored mesh edge; unset where the edge is not cut in its interior.
  std::array<std::optional<double>, 3> edge_cut_t;

  /// Chord side of a point: +1 on the plus piece, -1 on the minus piece.
  int side_of(Point p) const { return dot(normal, p - D) >= 0.0 ? 1 : -1; }
};

struct ElementClass {
  int side = 1;  // material side for non-interface elements
  std::optional<CutInfo> cut;
  bool is_interface() const { return cut.has_value(); }
};

/// Root of L along the segment p->q, as a parameter t in (0,1).
/// Empty when the endpoint values have the same (nonzero) sign. Scans the
/// segment at ~1/100 spacing first; more than one sign change means the mesh
/// cannot resolve the interface and raises AssumptionViolationError.
std::optional<double> edge_root(const LevelSet& ls, Point p, Point q);

/// Classifies one element. Cut points within 1e-12*h of a vertex are snapped
/// to it; an element is an interface element iff two distinct, non-degenerate
/// cut points survive snapping.
ElementClass classify(const LevelSet& ls, const Mesh& m, int element);

std::vector<ElementClass> classify_all(const LevelSet& ls, const Mesh& m, int threads = 1);

}  // namespace crifem
