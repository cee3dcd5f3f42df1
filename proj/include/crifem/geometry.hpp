#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "crifem/errors.hpp"

namespace crifem {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point p) { return std::sqrt(dot(p, p)); }
inline double dist(Point a, Point b) { return norm(a - b); }
inline Point lerp(Point a, Point b, double t) { return {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)}; }
inline Point midpoint(Point a, Point b) { return lerp(a, b, 0.5); }

/// Simple polygon, vertices in counter-clockwise order (signed area > 0).
struct Polygon {
  std::vector<Point> vertices;
};

/// Shoelace area; positive for CCW polygons. Throws InvalidInputError for < 3 vertices.
double polygon_area(const Polygon& p);
Point polygon_centroid(const Polygon& p);

double triangle_area(const std::array<Point, 3>& tri);  // signed

/// Result of splitting a triangle by the chord d->e.
/// `plus` is the piece to the left of the directed segment d->e.
struct ClipResult {
  Polygon plus;
  Polygon minus;
};

/// Splits a CCW triangle by a segment whose endpoints lie on the triangle
/// boundary (on two distinct edges, possibly at vertices). One piece is a
/// triangle and the other a quadrilateral, or both are triangles when an
/// endpoint coincides with a vertex.
/// Throws DegenerateCutError if d,e lie on the same edge (zero-area piece),
/// InvalidInputError if d or e is not on the boundary.
ClipResult clip_triangle_by_segment(const std::array<Point, 3>& tri, Point d, Point e);

/// Fan triangulation about vertex 0. Pre: convex polygon. Orientation preserved.
std::vector<std::array<Point, 3>> fan_triangulate(const Polygon& p);

/// Quadrature on the reference triangle, barycentric points, weights sum to 1/2.
/// `degree`: every polynomial of total degree <= degree integrates exactly.
struct TriangleRule {
  int degree = 0;
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;
};

/// Quadrature on the reference segment [0,1], weights sum to 1.
struct SegmentRule {
  int degree = 0;
  std::vector<double> points;
  std::vector<double> weights;
};

/// Supported degrees: 1 (centroid), 2 (3-point), 4 (6-point), 6 (12-point).
const TriangleRule& triangle_rule(int degree);
/// Supported degrees: 1 (midpoint), 3 (2-point Gauss), 5 (3-point Gauss).
const SegmentRule& segment_rule(int degree);

inline Point bary_point(const std::array<Point, 3>& tri, const std::array<double, 3>& b) {
  return {b[0] * tri[0].x + b[1] * tri[1].x + b[2] * tri[2].x,
          b[0] * tri[0].y + b[1] * tri[1].y + b[2] * tri[2].y};
}

/// Integrates fn(Point) over a physical triangle with the given rule.
template <class F>
auto integrate_triangle(const std::array<Point, 3>& tri, const TriangleRule& rule, F&& fn) {
  const double jac = 2.0 * std::abs(triangle_area(tri));
  auto acc = (rule.weights[0] * jac) * fn(bary_point(tri, rule.points[0]));
  for (std::size_t q = 1; q < rule.weights.size(); ++q)
    acc = acc + (rule.weights[q] * jac) * fn(bary_point(tri, rule.points[q]));
  return acc;
}

/// Integrates fn(Point) over the physical segment p->q.
template <class F>
auto integrate_segment(Point p, Point q, const SegmentRule& rule, F&& fn) {
  const double len = dist(p, q);
  auto acc = (rule.weights[0] * len) * fn(lerp(p, q, rule.points[0]));
  for (std::size_t i = 1; i < rule.weights.size(); ++i)
    acc = acc + (rule.weights[i] * len) * fn(lerp(p, q, rule.points[i]));
  return acc;
}

}  // namespace crifem
