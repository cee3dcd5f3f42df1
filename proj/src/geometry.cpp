#include "crifem/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace crifem {

double polygon_area(const Polygon& p) {
  if (p.vertices.size() < 3)
    throw InvalidInputError("polygon_area: need at least 3 vertices, got " +
                            std::to_string(p.vertices.size()));
  double twice = 0.0;
  const auto& v = p.vertices;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point& a = v[i];
    const Point& b = v[(i + 1) % v.size()];
    twice += a.x * b.y - b.x * a.y;
  }
  return 0.5 * twice;
}

Point polygon_centroid(const Polygon& p) {
  const auto& v = p.vertices;
  double a6x = 0.0, a6y = 0.0, twice = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point& a = v[i];
    const Point& b = v[(i + 1) % v.size()];
    const double w = a.x * b.y - b.x * a.y;
    twice += w;
    a6x += (a.x + b.x) * w;
    a6y += (a.y + b.y) * w;
  }
  return {a6x / (3.0 * twice), a6y / (3.0 * twice)};
}

double triangle_area(const std::array<Point, 3>& tri) {
  return 0.5 * cross(tri[1] - tri[0], tri[2] - tri[0]);
}

namespace {

double tri_diameter(const std::array<Point, 3>& tri) {
  return std::max({dist(tri[0], tri[1]), dist(tri[1], tri[2]), dist(tri[2], tri[0])});
}

// Index of the vertex p coincides with, or -1.
int vertex_hit(const std::array<Point, 3>& tri, Point p, double tol) {
  for (int i = 0; i < 3; ++i)
    if (dist(tri[i], p) <= tol) return i;
  return -1;
}

// Perpendicular distance from p to segment ab, with param clamped to the segment.
double seg_distance(Point a, Point b, Point p, double* t_out) {
  const Point ab = b - a;
  const double len2 = dot(ab, ab);
  double t = len2 > 0 ? dot(p - a, ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  if (t_out) *t_out = t;
  return dist(p, a + t * ab);
}

}  // namespace

ClipResult clip_triangle_by_segment(const std::array<Point, 3>& tri, Point d, Point e) {
  const double diam = tri_diameter(tri);
  const double vtol = 1e-12 * diam;   // callers pre-snap; this catches exact hits
  const double etol = 1e-9 * diam;

  // Locate each cut point: the vertex it coincides with, or its carrier edge.
  // Edge l runs from vertex l to vertex (l+1)%3.
  struct Loc {
    int vertex = -1;
    int edge = -1;
    double t = 0.0;
  };
  auto locate = [&](Point p) {
    Loc loc;
    loc.vertex = vertex_hit(tri, p, vtol);
    if (loc.vertex >= 0) return loc;
    for (int l = 0; l < 3; ++l) {
      double t = 0.0;
      if (seg_distance(tri[l], tri[(l + 1) % 3], p, &t) <= etol) {
        loc.edge = l;
        loc.t = t;
        return loc;
      }
    }
    throw InvalidInputError("clip_triangle_by_segment: cut point not on triangle boundary");
  };

  const Loc ld = locate(d);
  const Loc le = locate(e);
  if (ld.vertex >= 0 && le.vertex >= 0)
    throw DegenerateCutError("clip_triangle_by_segment: both cut points are vertices");
  if (ld.edge >= 0 && ld.edge == le.edge)
    throw DegenerateCutError("clip_triangle_by_segment: cut points on the same edge");
  // A vertex endpoint together with a point on an adjacent edge makes the chord
  // collinear with that edge.
  auto on_adjacent = [&](const Loc& v, const Loc& p) {
    return v.vertex >= 0 && p.edge >= 0 && (p.edge == v.vertex || (p.edge + 1) % 3 == v.vertex);
  };
  if (on_adjacent(ld, le) || on_adjacent(le, ld))
    throw DegenerateCutError("clip_triangle_by_segment: chord collinear with an edge");

  // Build the boundary cycle with the cut points inserted, remembering where
  // d and e sit in the cycle.
  std::vector<Point> cycle;
  int idx_d = -1, idx_e = -1;
  for (int l = 0; l < 3; ++l) {
    if (ld.vertex == l) idx_d = static_cast<int>(cycle.size());
    if (le.vertex == l) idx_e = static_cast<int>(cycle.size());
    cycle.push_back(tri[l]);
    // points interior to edge l, ordered by parameter
    const bool d_here = ld.edge == l;
    const bool e_here = le.edge == l;
    if (d_here && e_here) {
      // excluded above
    } else if (d_here) {
      idx_d = static_cast<int>(cycle.size());
      cycle.push_back(d);
    } else if (e_here) {
      idx_e = static_cast<int>(cycle.size());
      cycle.push_back(e);
    }
  }

  auto chain = [&](int from, int to) {
    Polygon poly;
    const int n = static_cast<int>(cycle.size());
    for (int i = from;; i = (i + 1) % n) {
      poly.vertices.push_back(cycle[i]);
      if (i == to) break;
    }
    return poly;
  };

  // Sub-paths of a CCW cycle closed by the chord stay CCW.
  Polygon a = chain(idx_d, idx_e);
  Polygon b = chain(idx_e, idx_d);
  const double area_t = std::abs(triangle_area(tri));
  if (a.vertices.size() < 3 || b.vertices.size() < 3 ||
      polygon_area(a) < 1e-14 * area_t || polygon_area(b) < 1e-14 * area_t)
    throw DegenerateCutError("clip_triangle_by_segment: degenerate piece");

  // `a` runs d -> ... -> e and is closed by the edge e->d, so it lies to the
  // right of d->e; swap so that plus is the left piece.
  return {std::move(b), std::move(a)};
}

std::vector<std::array<Point, 3>> fan_triangulate(const Polygon& p) {
  if (p.vertices.size() < 3)
    throw InvalidInputError("fan_triangulate: need at least 3 vertices");
  std::vector<std::array<Point, 3>> tris;
  for (std::size_t i = 1; i + 1 < p.vertices.size(); ++i)
    tris.push_back({p.vertices[0], p.vertices[i], p.vertices[i + 1]});
  return tris;
}

namespace {

TriangleRule make_triangle_rule(int degree) {
  TriangleRule r;
  r.degree = degree;
  auto push = [&](double b0, double b1, double b2, double w) {
    r.points.push_back({b0, b1, b2});
    r.weights.push_back(0.5 * w);  // reference measure 1/2
  };
  auto push3 = [&](double a, double w) {
    const double b = 1.0 - 2.0 * a;
    push(b, a, a, w);
    push(a, b, a, w);
    push(a, a, b, w);
  };
  auto push6 = [&](double a, double b, double w) {
    const double c = 1.0 - a - b;
    push(a, b, c, w);
    push(a, c, b, w);
    push(b, a, c, w);
    push(b, c, a, w);
    push(c, a, b, w);
    push(c, b, a, w);
  };
  switch (degree) {
    case 1:
      push(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 1.0);
      break;
    case 2:
      // edge-midpoint rule
      push(0.5, 0.5, 0.0, 1.0 / 3.0);
      push(0.0, 0.5, 0.5, 1.0 / 3.0);
      push(0.5, 0.0, 0.5, 1.0 / 3.0);
      break;
    case 4:
      // Dunavant degree 4, 6 points
      push3(0.445948490915965, 0.223381589678011);
      push3(0.091576213509771, 0.109951743655322);
      break;
    case 6:
      // Dunavant degree 6, 12 points
      push3(0.249286745170910, 0.116786275726379);
      push3(0.063089014491502, 0.050844906370207);
      push6(0.053145049844816, 0.310352451033785, 0.082851075618374);
      break;
    default:
      throw InvalidInputError("triangle_rule: unsupported degree " + std::to_string(degree));
  }
  return r;
}

SegmentRule make_segment_rule(int degree) {
  SegmentRule r;
  r.degree = degree;
  switch (degree) {
    case 1:
      r.points = {0.5};
      r.weights = {1.0};
      break;
    case 3: {
      const double s = 1.0 / std::sqrt(3.0);
      r.points = {0.5 * (1.0 - s), 0.5 * (1.0 + s)};
      r.weights = {0.5, 0.5};
      break;
    }
    case 5: {
      const double s = std::sqrt(0.6);
      r.points = {0.5 * (1.0 - s), 0.5, 0.5 * (1.0 + s)};
      r.weights = {5.0 / 18.0, 4.0 / 9.0, 5.0 / 18.0};
      break;
    }
    default:
      throw InvalidInputError("segment_rule: unsupported degree " + std::to_string(degree));
  }
  return r;
}

}  // namespace

const TriangleRule& triangle_rule(int degree) {
  static const TriangleRule r1 = make_triangle_rule(1);
  static const TriangleRule r2 = make_triangle_rule(2);
  static const TriangleRule r4 = make_triangle_rule(4);
  static const TriangleRule r6 = make_triangle_rule(6);
  switch (degree) {
    case 1: return r1;
    case 2: return r2;
    case 4: return r4;
    case 6: return r6;
    default: throw InvalidInputError("triangle_rule: unsupported degree " + std::to_string(degree));
  }
}

const SegmentRule& segment_rule(int degree) {
  static const SegmentRule r1 = make_segment_rule(1);
  static const SegmentRule r3 = make_segment_rule(3);
  static const SegmentRule r5 = make_segment_rule(5);
  switch (degree) {
    case 1: return r1;
    case 3: return r3;
    case 5: return r5;
    default: throw InvalidInputError("segment_rule: unsupported degree " + std::to_string(degree));
  }
}

}  // namespace crifem
