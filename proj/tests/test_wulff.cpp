#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "support.hpp"
#include "wulff_clusters/errors.hpp"
#include "wulff_clusters/wulff.hpp"

using namespace wulff;
using testing::Gen;

TEST_CASE("square from four half-planes") {
  const auto w = boundary_by_halfplane_intersection(Anisotropy::crystalline_l1(), 4);
  REQUIRE(w.vertices.size() == 4);
  for (const Vec2 v : w.vertices) {
    CHECK(std::abs(std::abs(v.x) - 1.0) <= 1e-12);
    CHECK(std::abs(std::abs(v.y) - 1.0) <= 1e-12);
  }
  CHECK(area(w) == doctest::Approx(4.0));
  CHECK(diameter(w) == doctest::Approx(2.0 * std::sqrt(2.0)));
  CHECK(scale_to_area(w, 1.0).lambda == doctest::Approx(0.5));
  CHECK(aniso_perimeter(Anisotropy::crystalline_l1(), w.vertices, true) == doctest::Approx(8.0));
}

TEST_CASE("circumscribed hexagon") {
  const auto w = boundary_by_halfplane_intersection(Anisotropy::euclidean(), 6);
  CHECK(w.vertices.size() == 6);
  CHECK(area(w) == doctest::Approx(2.0 * std::sqrt(3.0)));
}

TEST_CASE("disk and ellipse") {
  const auto disk = boundary_by_gradient_map(Anisotropy::euclidean(), 4096);
  CHECK(std::abs(area(disk) - kPi) <= 1e-5);
  CHECK(std::abs(diameter(disk) - 2.0) <= 1e-4);
  CHECK(std::abs(aniso_perimeter(Anisotropy::euclidean(), disk.vertices, true) - kTwoPi) <= 1e-4);
  CHECK(scale_to_area(disk, 4.0 * area(disk)).lambda == doctest::Approx(2.0));

  const auto ell = boundary_by_halfplane_intersection(Anisotropy::elliptic(2, 1), 4096);
  CHECK(std::abs(area(ell) - 2.0 * kPi) <= 1e-3);
  CHECK(std::abs(diameter(ell) - 4.0) <= 1e-3);

  const auto ellg = boundary_by_gradient_map(Anisotropy::elliptic(2, 1), 720);
  const auto oracle = boundary_by_halfplane_intersection(Anisotropy::elliptic(2, 1), 10000);
  CHECK(polyline_hausdorff(ellg.vertices, true, oracle.vertices, true) <= 1e-3);
  for (const Vec2 v : ellg.vertices) CHECK(v.x * v.x / 4.0 + v.y * v.y == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("smoothed l1 is close to the square") {
  const auto w = boundary_by_gradient_map(Anisotropy::smoothed_l1(0.05), 1024);
  const auto sq = boundary_by_halfplane_intersection(Anisotropy::crystalline_l1(), 4);
  CHECK(polyline_hausdorff(w.vertices, true, sq.vertices, true) <= 0.1);
}

TEST_CASE("preconditions") {
  CHECK_THROWS_AS(boundary_by_gradient_map(Anisotropy::crystalline_l1(), 256), Error);
  CHECK_THROWS_AS(boundary_by_gradient_map(Anisotropy::euclidean(), 16), Error);
  CHECK_THROWS_AS(boundary_by_halfplane_intersection(Anisotropy::euclidean(), 3), Error);
  const std::vector<Vec2> dup{{0, 0}, {0, 0}, {1, 0}};
  CHECK_THROWS_AS(aniso_perimeter(Anisotropy::euclidean(), dup), Error);
  CHECK_THROWS_AS(scale_to_area(boundary_by_gradient_map(Anisotropy::euclidean(), 64), 0.0), Error);
}

TEST_CASE("property: boundary invariants") {
  for (const auto& a : testing::regular_family()) {
    CAPTURE(a.name());
    const auto w = boundary_by_gradient_map(a, 1024);
    CHECK(is_convex_ccw(w.vertices));
    std::vector<Vec2> neg;
    for (const Vec2 v : w.vertices) neg.push_back(-v);
    CHECK(polyline_hausdorff(w.vertices, true, neg, true) <= 1e-8);
    for (std::size_t k = 0; k < w.vertices.size(); k += 37)
      CHECK(std::abs(dual_norm(a, w.vertices[k]) - 1.0) <= 1e-6);
    for (double m : {0.1, 1.0, 10.0}) CHECK(area(scale_to_area(w, m)) == doctest::Approx(m).epsilon(1e-12));
  }
}

TEST_CASE("property: gradient map and half-planes agree to second order") {
  for (const auto& a : testing::regular_family()) {
    for (std::size_t n : {256u, 1024u}) {
      CAPTURE(a.name());
      CAPTURE(n);
      const auto g = boundary_by_gradient_map(a, n);
      const auto h = boundary_by_halfplane_intersection(a, n);
      const double step = kTwoPi / static_cast<double>(n);
      CHECK(polyline_hausdorff(g.vertices, true, h.vertices, true) <= 5.0 * step * step * diameter(g));
    }
  }
}

TEST_CASE("property: perimeter is 1-homogeneous") {
  Gen gen(21);
  for (const auto& a : testing::all_kinds()) {
    std::vector<Vec2> curve;
    for (int i = 0; i < 20; ++i) curve.push_back({gen.uniform(-1, 1), gen.uniform(-1, 1)});
    const double p = aniso_perimeter(a, curve);
    const double lam = gen.uniform(0.1, 10.0);
    std::vector<Vec2> scaled;
    for (const Vec2 v : curve) scaled.push_back(lam * v);
    CHECK(aniso_perimeter(a, scaled) == doctest::Approx(lam * p).epsilon(1e-12));
  }
}

TEST_CASE("property: the Wulff shape beats random convex competitors") {
  Gen gen(22);
  for (const auto& a : testing::regular_family()) {
    CAPTURE(a.name());
    const auto w = scale_to_area(boundary_by_gradient_map(a, 1024), 1.0);
    std::vector<Vec2> scaled;
    for (const Vec2 v : w.vertices) scaled.push_back(w.lambda * v);
    const double best = aniso_perimeter(a, scaled, true);
    for (int trial = 0; trial < 100; ++trial) {
      // Convex polygon: sorted random angles on a random ellipse.
      const int n = gen.integer(3, 40);
      std::vector<double> t(static_cast<std::size_t>(n));
      for (auto& x : t) x = gen.angle();
      std::sort(t.begin(), t.end());
      const double ax = gen.uniform(0.3, 3.0), rot = gen.angle();
      std::vector<Vec2> poly;
      for (double s : t) {
        const Vec2 p{ax * std::cos(s), std::sin(s) / ax};
        poly.push_back({std::cos(rot) * p.x - std::sin(rot) * p.y, std::sin(rot) * p.x + std::cos(rot) * p.y});
      }
      const double A = signed_area(poly);
      if (A <= 1e-6) continue;
      for (auto& p : poly) p = p / std::sqrt(A);
      CHECK(aniso_perimeter(a, poly, true) >= best - 1e-6);
    }
  }
}

TEST_CASE("dual norm") {
  CHECK(dual_norm(Anisotropy::euclidean(), {3, 4}) == doctest::Approx(5.0).epsilon(1e-9));
  // l1 dual is the max norm
  CHECK(dual_norm(Anisotropy::crystalline_l1(), {0.5, -0.25}) == doctest::Approx(0.5).epsilon(1e-9));
}
