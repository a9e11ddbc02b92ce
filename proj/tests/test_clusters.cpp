#include <doctest.h>

#include <cmath>
#include <vector>

#include "support.hpp"
#include "wulff_clusters/clusters.hpp"
#include "wulff_clusters/errors.hpp"

using namespace wulff;
using testing::Gen;

namespace {

constexpr std::size_t kFine = std::size_t{1} << 16;

// Euclidean lens: two 120 degree arcs of radius r on a chord of half-width
// r sqrt(3) / 2; area 2 (pi/3 - sqrt(3)/4) r^2.
struct LensOracle {
  double r, half_width, arcs;
  explicit LensOracle(double m)
      : r(std::sqrt(m / (2.0 * (kPi / 3.0 - std::sqrt(3.0) / 4.0)))),
        half_width(r * std::sqrt(3.0) / 2.0),
        arcs(2.0 * r * 2.0 * kPi / 3.0) {}
  double energy(double R) const { return 2.0 * (R - half_width) + arcs; }
};

// Euclidean triod: three 60 degree arcs of radius r on an equilateral
// triangle of side r; area (pi - sqrt(3)) r^2 / 2, vertices r / sqrt(3)
// from the centre.
struct TriodOracle {
  double r, circumradius, arcs;
  explicit TriodOracle(double m)
      : r(std::sqrt(2.0 * m / (kPi - std::sqrt(3.0)))), circumradius(r / std::sqrt(3.0)), arcs(kPi * r) {}
  double energy(double R) const { return 3.0 * (R - circumradius) + arcs; }
};

double rel(double x, double y) { return std::abs(x - y) / std::abs(y); }

Cluster translated(Cluster c, Vec2 d) {
  for (auto& i : c.interfaces)
    for (auto& p : i.points) p += d;
  for (auto& p : c.junctions) p += d;
  for (auto& p : c.anchors) p += d;
  return c;
}

}  // namespace

TEST_CASE("euclidean lens against the circular-segment oracle") {
  const auto e = Anisotropy::euclidean();
  const LensOracle o(1.0);
  const Cluster c = standard_lens_cluster(e, Direction::from_degrees(90), 1.0, 10.0, kFine);
  CHECK(rel(cluster_perimeter(e, c), o.energy(10.0)) <= 1e-8);
  CHECK(rel(finite_chamber_perimeter(e, c), o.arcs) <= 1e-8);
  CHECK(rel(signed_area(c.finite_boundary()), 1.0) <= 1e-8);
  REQUIRE(c.junctions.size() == 2);
  CHECK(std::abs(std::abs(c.junctions[0].x) - o.half_width) <= 1e-8);
  CHECK(std::abs(c.junctions[0].y) <= 1e-12);
}

TEST_CASE("euclidean triod against the Reuleaux oracle") {
  const auto e = Anisotropy::euclidean();
  const TriodOracle o(1.0);
  const Cluster c = standard_triod_cluster(e, Direction::from_degrees(90), 1.0, 10.0, kFine);
  CHECK(rel(cluster_perimeter(e, c), o.energy(10.0)) <= 1e-8);
  CHECK(rel(finite_chamber_perimeter(e, c), o.arcs) <= 1e-8);
  REQUIRE(c.junctions.size() == 3);
  for (const Vec2 j : c.junctions) CHECK(std::abs(norm(j) - o.circumradius) <= 1e-8);
}

TEST_CASE("euclidean junction tangents meet at 120 degrees") {
  const auto e = Anisotropy::euclidean();
  for (auto kind : {ClusterKind::lens, ClusterKind::triod}) {
    const Cluster c = standard_cluster(kind, e, Direction::from_degrees(90), 1.0, 10.0);
    for (const auto& t : c.junction_triples) {
      const Vec2 a = rotate_ccw(t.n_hat.vec()), b = rotate_ccw(t.nu1.vec()), d = rotate_ccw(t.nu2.vec());
      CHECK(std::abs(testing::degrees_between(a, b) - 120.0) <= 1e-8);
      CHECK(std::abs(testing::degrees_between(b, d) - 120.0) <= 1e-8);
      CHECK(std::abs(testing::degrees_between(d, a) - 120.0) <= 1e-8);
    }
  }
}

TEST_CASE("small mass limits") {
  const auto e = Anisotropy::euclidean();
  CHECK(std::abs(cluster_perimeter(e, standard_lens_cluster(e, Direction::from_degrees(90), 1e-6, 10.0)) - 20.0) <=
        1e-2);
  CHECK(std::abs(cluster_perimeter(e, standard_triod_cluster(e, Direction::from_degrees(90), 1e-6, 10.0)) - 30.0) <=
        1e-2);
}

TEST_CASE("straight exterior line") {
  Cluster line;
  line.chambers = {{2, false}, {3, false}};
  line.interfaces = {{2, 3, {{10.0, 0.0}, {-10.0, 0.0}}}};
  CHECK(cluster_perimeter(Anisotropy::euclidean(), line) == doctest::Approx(20.0));
  CHECK(cluster_perimeter(Anisotropy::crystalline_l1(), line) == doctest::Approx(20.0));
}

TEST_CASE("rotation and translation invariance") {
  const auto e = Anisotropy::euclidean();
  const double E0 = cluster_perimeter(e, standard_triod_cluster(e, Direction::from_degrees(90), 1.0, 10.0, kFine));
  Gen gen(41);
  for (int i = 0; i < 8; ++i) {
    const Direction n = Direction::from_angle(gen.angle());
    CHECK(rel(cluster_perimeter(e, standard_triod_cluster(e, n, 1.0, 10.0, kFine)), E0) <= 1e-10);
  }
  for (const auto& a : testing::regular_family()) {
    const Cluster c = standard_lens_cluster(a, Direction::from_degrees(30), 1.0, 10.0);
    const Vec2 along = rotate_ccw(c.n_hat.vec());
    const Cluster t = translated(c, 0.7 * along);
    CHECK(std::abs(cluster_perimeter(a, t) - cluster_perimeter(a, c)) <= 1e-12 * cluster_perimeter(a, c));
  }
}

TEST_CASE("radius and mass preconditions") {
  const auto e = Anisotropy::euclidean();
  CHECK_THROWS_AS(standard_lens_cluster(e, Direction::from_degrees(90), 1.0, 2.0), Error);
  try {
    standard_triod_cluster(e, Direction::from_degrees(90), 1.0, 1.0);
    FAIL("expected RadiusTooSmall");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::RadiusTooSmall);
  }
  CHECK_THROWS_AS(standard_lens_cluster(e, Direction::from_degrees(90), 0.0, 10.0), Error);
  try {
    standard_lens_cluster(Anisotropy::crystalline_l1(), Direction::from_degrees(90), 1.0, 10.0);
    FAIL("expected NotRegular");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::NotRegular);
  }
}

TEST_CASE("chamber lookup") {
  const Cluster c = standard_lens_cluster(Anisotropy::euclidean(), Direction::from_degrees(90), 1.0, 10.0);
  CHECK(c.chamber_at({0, 0}) == 1);
  CHECK(c.chamber_at({5, 5}) != c.chamber_at({5, -5}));
  CHECK(c.infinite_chamber_at({0, 0.01}) != 1);
}

TEST_CASE("property: built clusters over the regular family") {
  Gen gen(42);
  for (const auto& a : testing::regular_family()) {
    for (auto kind : {ClusterKind::lens, ClusterKind::triod}) {
      for (int k = 0; k < 8; ++k) {
        const Direction n = Direction::from_angle(gen.angle());
        CAPTURE(a.name());
        CAPTURE(n.degrees());
        const Cluster c = standard_cluster(kind, a, n, 1.0, 10.0);
        const ClusterReport r = check_cluster(a, c);
        CHECK(r.junction_degrees_ok);
        CHECK(r.non_crossing);
        CHECK(r.area_rel_error <= 1e-8);
        CHECK(r.max_straight_deviation <= 1e-9);
        CHECK(r.max_anchor_error <= 1e-12);
        CHECK(r.max_young_residual <= kYoungTolerance);
        CHECK(r.finite_chamber_convex);
        CHECK(r.ok());

        // area doubling scales the arcs by sqrt 2
        const Cluster c2 = standard_cluster(kind, a, n, 2.0, 10.0);
        CHECK(rel(finite_chamber_perimeter(a, c2), std::sqrt(2.0) * finite_chamber_perimeter(a, c)) <= 1e-8);

        const PerimeterCheck pc = cluster_perimeter_check(a, c);
        CHECK(pc.consistent);
        CHECK(std::abs(pc.interface_sum - pc.chamber_half_sum) <= 1e-9 * pc.interface_sum);

        // linear perimeter bound with C0 = 8 S phi_max, S the number of chambers
        const double C0 = 8.0 * static_cast<double>(c.chambers.size()) * a.max_on_circle();
        for (int s = 0; s < 32; ++s) {
          const Vec2 x = gen.uniform(0.0, 10.0) * gen.unit();
          const double r = gen.uniform(1.0, 10.0);
          CHECK(cluster_perimeter_in_ball(a, c, x, r) <= C0 * r);
        }
      }
    }
  }
}

TEST_CASE("perimeter in a ball") {
  const auto e = Anisotropy::euclidean();
  const Cluster c = standard_lens_cluster(e, Direction::from_degrees(90), 1.0, 10.0);
  CHECK(cluster_perimeter_in_ball(e, c, {0, 0}, 20.0) == doctest::Approx(cluster_perimeter(e, c)));
  // a unit ball far along the flat part meets one straight segment of length 2
  CHECK(cluster_perimeter_in_ball(e, c, {6, 0}, 1.0) == doctest::Approx(2.0));
}

TEST_CASE("minimising direction is a direction in [0, pi)") {
  const Direction d = minimizing_direction(Anisotropy::elliptic(2, 1), ClusterKind::lens, 1.0, 10.0, 128);
  CHECK(d.angle() >= 0.0);
  CHECK(d.angle() < kPi);
  const double best = cluster_perimeter(Anisotropy::elliptic(2, 1),
                                        standard_lens_cluster(Anisotropy::elliptic(2, 1), d, 1.0, 10.0, 128));
  for (int k = 0; k < 16; ++k) {
    const Direction n = Direction::from_angle(kPi * k / 16.0);
    CHECK(best <= cluster_perimeter(Anisotropy::elliptic(2, 1),
                                    standard_lens_cluster(Anisotropy::elliptic(2, 1), n, 1.0, 10.0, 128)) +
                      1e-9);
  }
}
