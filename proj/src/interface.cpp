#include "crifem/interface.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>

#include "crifem/parallel.hpp"

namespace crifem {

double LevelSet::value(Point p) const {
  switch (kind) {
    case Kind::circle: return p.x * p.x + p.y * p.y - r0 * r0;
    case Kind::ellipse: return 0.25 * p.x * p.x + p.y * p.y - r0 * r0;
    case Kind::line: return p.x - line_x;
  }
  return 0.0;
}

Point LevelSet::gradient(Point p) const {
  switch (kind) {
    case Kind::circle: return {2.0 * p.x, 2.0 * p.y};
    case Kind::ellipse: return {0.5 * p.x, 2.0 * p.y};
    case Kind::line: return {1.0, 0.0};
  }
  return {0.0, 0.0};
}

LevelSet make_circle(double r0) {
  if (!(r0 > 0)) throw InvalidInputError("make_circle: r0 must be positive");
  return {LevelSet::Kind::circle, r0, 0.0};
}

LevelSet make_ellipse(double r0) {
  if (!(r0 > 0)) throw InvalidInputError("make_ellipse: r0 must be positive");
  return {LevelSet::Kind::ellipse, r0, 0.0};
}

LevelSet make_vertical_line(double x0) { return {LevelSet::Kind::line, 0.0, x0}; }

namespace {
inline int sgn(double v) { return (v > 0.0) - (v < 0.0); }
}  // namespace

std::optional<double> edge_root(const LevelSet& ls, Point p, Point q) {
  constexpr int kSamples = 100;
  double values[kSamples + 1];
  for (int i = 0; i <= kSamples; ++i)
    values[i] = ls.value(lerp(p, q, static_cast<double>(i) / kSamples));

  // Count sign changes between consecutive nonzero samples.
  int flips = 0;
  int prev_idx = -1, prev_sign = 0;
  int bracket_lo = -1, bracket_hi = -1;
  for (int i = 0; i <= kSamples; ++i) {
    const int s = sgn(values[i]);
    if (s == 0) continue;
    if (prev_sign != 0 && s != prev_sign) {
      ++flips;
      bracket_lo = prev_idx;
      bracket_hi = i;
    }
    prev_idx = i;
    prev_sign = s;
  }
  if (flips > 1)
    throw AssumptionViolationError(
        "edge_root: interface crosses an edge more than once (mesh too coarse)");
  if (flips == 0) return std::nullopt;

  const double scale = std::max({std::abs(values[0]), std::abs(values[kSamples]), 1e-300});
  double ta = static_cast<double>(bracket_lo) / kSamples;
  double tb = static_cast<double>(bracket_hi) / kSamples;
  int sa = sgn(values[bracket_lo]);
  for (int it = 0; it < 50; ++it) {
    const double tm = 0.5 * (ta + tb);
    const double vm = ls.value(lerp(p, q, tm));
    if (std::abs(vm) <= 1e-14 * scale) return tm;
    if (sgn(vm) == sa)
      ta = tm;
    else
      tb = tm;
  }
  return 0.5 * (ta + tb);
}

namespace {

struct CutPoint {
  Point p;
  int vertex = -1;       // local vertex index when snapped, else -1
  int edge = -1;         // local edge index for interior cuts
  double t_canonical = 0.0;
};

}  // namespace

ElementClass classify(const LevelSet& ls, const Mesh& m, int element) {
  const auto tri = m.tri_points(element);
  const double snap = 1e-12 * m.h;

  // A vertex lies on the interface when its level-set distance estimate is
  // within the snapping tolerance.
  bool vertex_on[3];
  for (int v = 0; v < 3; ++v) {
    const double g = std::max(norm(ls.gradient(tri[v])), 1e-30);
    vertex_on[v] = std::abs(ls.value(tri[v])) <= snap * g;
  }

  std::vector<CutPoint> cuts;
  auto add_vertex_cut = [&](int v) {
    for (const auto& c : cuts)
      if (c.vertex == v) return;
    cuts.push_back({tri[v], v, -1, 0.0});
  };
  for (int v = 0; v < 3; ++v)
    if (vertex_on[v]) add_vertex_cut(v);

  for (int l = 0; l < 3; ++l) {
    const int va = (l + 1) % 3, vb = (l + 2) % 3;
    if (vertex_on[va] || vertex_on[vb]) continue;  // crossing is at the vertex itself
    const int ge = m.tri_edges[element][l];
    const auto [P, Q] = m.edge_points(ge);  // canonical direction, shared with the neighbor
    if (sgn(ls.value(P)) * sgn(ls.value(Q)) >= 0) continue;
    const auto t = edge_root(ls, P, Q);
    if (!t) continue;
    const Point r = lerp(P, Q, *t);
    bool snapped = false;
    for (int v = 0; v < 3; ++v)
      if (dist(r, tri[v]) <= snap) {
        add_vertex_cut(v);
        snapped = true;
        break;
      }
    if (!snapped) cuts.push_back({r, -1, l, *t});
  }

  auto noninterface = [&]() {
    ElementClass c;
    const double lc = ls.value(polygon_centroid(Polygon{{tri[0], tri[1], tri[2]}}));
    c.side = lc >= 0.0 ? 1 : -1;
    return c;
  };

  if (cuts.size() < 2) return noninterface();
  if (cuts.size() > 2)
    throw AssumptionViolationError("classify: element " + std::to_string(element) +
                                   " has more than two cut edges (mesh too coarse)");
  if (cuts[0].vertex >= 0 && cuts[1].vertex >= 0)
    return noninterface();  // chord runs along an element edge

  // D on the lower-indexed carrier edge; vertex cuts ordered last.
  auto rank = [](const CutPoint& c) { return c.edge >= 0 ? c.edge : 3 + c.vertex; };
  if (rank(cuts[0]) > rank(cuts[1])) std::swap(cuts[0], cuts[1]);

  ClipResult pieces;
  try {
    pieces = clip_triangle_by_segment(tri, cuts[0].p, cuts[1].p);
  } catch (const DegenerateCutError&) {
    return noninterface();
  }

  const double lp = ls.value(polygon_centroid(pieces.plus));
  const double lm = ls.value(polygon_centroid(pieces.minus));
  if (sgn(lp) == sgn(lm)) return noninterface();  // tangential sliver

  CutInfo info;
  info.element = element;
  info.D = cuts[0].p;
  info.E = cuts[1].p;
  info.edge_D = cuts[0].edge;
  info.edge_E = cuts[1].edge;
  for (const auto& c : cuts)
    if (c.edge >= 0) info.edge_cut_t[c.edge] = c.t_canonical;
  if (lp > 0.0) {
    info.plus_poly = std::move(pieces.plus);
    info.minus_poly = std::move(pieces.minus);
  } else {
    info.plus_poly = std::move(pieces.minus);
    info.minus_poly = std::move(pieces.plus);
  }

  const Point d = info.E - info.D;
  Point n{d.y, -d.x};
  const double len = norm(n);
  n = (1.0 / len) * n;
  if (dot(n, polygon_centroid(info.plus_poly) - midpoint(info.D, info.E)) < 0.0)
    n = -1.0 * n;
  info.normal = n;

  ElementClass c;
  c.cut = std::move(info);
  return c;
}

std::vector<ElementClass> classify_all(const LevelSet& ls, const Mesh& m, int threads) {
  const int nt = static_cast<int>(m.triangles.size());
  std::vector<ElementClass> classes(nt);
  std::exception_ptr err;
  std::mutex err_mutex;
  parallel_for(nt, threads, [&](int t) {
    try {
      classes[t] = classify(ls, m, t);
    } catch (...) {
      std::scoped_lock lock(err_mutex);
      if (!err) err = std::current_exception();
    }
  });
  if (err) std::rethrow_exception(err);
  return classes;
}

}  // namespace crifem
