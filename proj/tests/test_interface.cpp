#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "crifem/interface.hpp"

using namespace crifem;

TEST_CASE("edge_root finds single crossings") {
  const LevelSet circle = make_circle(0.5);
  SUBCASE("analytic midpoint crossing") {
    const auto t = edge_root(circle, {0, 0}, {1, 0});
    REQUIRE(t.has_value());
    CHECK(*t == doctest::Approx(0.5).epsilon(1e-13));
  }
  SUBCASE("closed-form quadratic oracle, crosschecked with bisection") {
    // r0 = 0.36, horizontal edge y = 0.25 from x=0.25 to x=0.375:
    // root at x* = sqrt(0.36^2 - 0.25^2), t* = (x* - 0.25)/0.125
    const LevelSet ls = make_circle(0.36);
    const double xstar = std::sqrt(0.36 * 0.36 - 0.25 * 0.25);
    const double tstar = (xstar - 0.25) / 0.125;
    CHECK(tstar == doctest::Approx(0.07229343).epsilon(1e-6));
    const auto t = edge_root(ls, {0.25, 0.25}, {0.375, 0.25});
    REQUIRE(t.has_value());
    CHECK(*t == doctest::Approx(tstar).epsilon(1e-12));
    const Point root = lerp({0.25, 0.25}, {0.375, 0.25}, *t);
    CHECK(std::abs(ls.value(root)) <= 1e-13);
  }
  SUBCASE("same sign gives no root") {
    CHECK(!edge_root(circle, {0.6, 0.6}, {0.9, 0.9}).has_value());
    CHECK(!edge_root(circle, {0.0, 0.0}, {0.1, 0.1}).has_value());
  }
  SUBCASE("double crossing raises the coarse-mesh error") {
    CHECK_THROWS_AS(edge_root(make_circle(0.3), {-1, 0}, {1, 0}), AssumptionViolationError);
  }
}

TEST_CASE("classify tags elements by the level set") {
  const Mesh m = build_uniform_mesh(-1, 1, -1, 1, 3);
  const LevelSet ls = make_circle(0.36);

  SUBCASE("element strictly inside is NonInterface(-)") {
    // find the element containing the origin-ish cell
    for (int t = 0; t < static_cast<int>(m.triangles.size()); ++t) {
      const auto tri = m.tri_points(t);
      const Point c = polygon_centroid({{tri[0], tri[1], tri[2]}});
      if (norm(c) < 0.15) {
        const auto cls = classify(ls, m, t);
        CHECK(!cls.is_interface());
        CHECK(cls.side == -1);
      }
      if (norm(c) > 0.8) {
        const auto cls = classify(ls, m, t);
        CHECK(!cls.is_interface());
        CHECK(cls.side == 1);
      }
    }
  }

  SUBCASE("straddling elements carry valid cut data") {
    int n_cut = 0;
    for (int t = 0; t < static_cast<int>(m.triangles.size()); ++t) {
      const auto cls = classify(ls, m, t);
      if (!cls.is_interface()) continue;
      ++n_cut;
      const CutInfo& cut = *cls.cut;
      CHECK(cut.element == t);
      CHECK(std::abs(ls.value(cut.D)) <= 1e-13);
      CHECK(std::abs(ls.value(cut.E)) <= 1e-13);
      CHECK(cut.edge_D != cut.edge_E);
      // side polygons on the correct side of the true interface
      CHECK(ls.value(polygon_centroid(cut.plus_poly)) > 0);
      CHECK(ls.value(polygon_centroid(cut.minus_poly)) < 0);
      // normal points from minus into plus
      CHECK(dot(cut.normal, polygon_centroid(cut.plus_poly) - midpoint(cut.D, cut.E)) > 0);
      CHECK(norm(cut.normal) == doctest::Approx(1.0).epsilon(1e-14));
      // pieces partition the triangle
      const double a = polygon_area(cut.plus_poly) + polygon_area(cut.minus_poly);
      CHECK(a == doctest::Approx(std::abs(triangle_area(m.tri_points(t)))).epsilon(1e-13));
    }
    CHECK(n_cut > 0);
  }
}

TEST_CASE("interface through a vertex is snapped away") {
  // r0 = 0.375 puts the circle exactly through grid vertices (±0.375, 0) and
  // (0, ±0.375) of the k=3 mesh; elements touching only at that vertex stay
  // non-interface.
  const Mesh m = build_uniform_mesh(-1, 1, -1, 1, 3);
  const LevelSet ls = make_circle(0.375);
  for (int t = 0; t < static_cast<int>(m.triangles.size()); ++t) {
    const auto tri = m.tri_points(t);
    int on = 0, pos = 0, neg = 0;
    for (const auto& v : tri) {
      const double l = ls.value(v);
      if (std::abs(l) < 1e-14)
        ++on;
      else if (l > 0)
        ++pos;
      else
        ++neg;
    }
    if (on == 1 && (pos == 2 || neg == 2)) {
      const auto cls = classify(ls, m, t);
      CHECK(!cls.is_interface());
      CHECK(cls.side == (pos == 2 ? 1 : -1));
    }
  }
}

TEST_CASE("classified minus area approximates the disk") {
  const Mesh m = build_uniform_mesh(-1, 1, -1, 1, 6);
  const LevelSet ls = make_circle(0.36);
  const auto classes = classify_all(ls, m, 2);
  double minus_area = 0;
  for (int t = 0; t < static_cast<int>(m.triangles.size()); ++t) {
    if (classes[t].is_interface())
      minus_area += polygon_area(classes[t].cut->minus_poly);
    else if (classes[t].side < 0)
      minus_area += std::abs(triangle_area(m.tri_points(t)));
  }
  const double disk = M_PI * 0.36 * 0.36;
  CHECK(std::abs(minus_area - disk) / disk < 0.01);
}

TEST_CASE("vertical line interface") {
  const Mesh m = build_uniform_mesh(-1, 1, -1, 1, 3);
  const double gamma = 1.0 / M_PI;
  const LevelSet ls = make_vertical_line(gamma);
  CHECK(ls.value({gamma, 0.3}) == doctest::Approx(0.0));
  const auto classes = classify_all(ls, m, 1);
  int n_cut = 0;
  for (const auto& cls : classes) {
    if (!cls.is_interface()) continue;
    ++n_cut;
    CHECK(cls.cut->D.x == doctest::Approx(gamma).epsilon(1e-12));
    CHECK(cls.cut->E.x == doctest::Approx(gamma).epsilon(1e-12));
  }
  // the line crosses 16 cell rows, two triangles each
  CHECK(n_cut == 32);
}

TEST_CASE("classify_all matches element-wise classify and is thread-stable") {
  const Mesh m = build_uniform_mesh(-1, 1, -1, 1, 4);
  const LevelSet ls = make_ellipse(0.4);
  const auto serial = classify_all(ls, m, 1);
  const auto parallel = classify_all(ls, m, 4);
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t t = 0; t < serial.size(); ++t) {
    CHECK(serial[t].is_interface() == parallel[t].is_interface());
    if (serial[t].is_interface()) {
      CHECK(serial[t].cut->D.x == parallel[t].cut->D.x);
      CHECK(serial[t].cut->D.y == parallel[t].cut->D.y);
      CHECK(serial[t].cut->E.x == parallel[t].cut->E.x);
      CHECK(serial[t].cut->E.y == parallel[t].cut->E.y);
    } else {
      CHECK(serial[t].side == parallel[t].side);
    }
  }
}
