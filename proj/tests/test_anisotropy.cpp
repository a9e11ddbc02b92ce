#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "wulff_clusters/anisotropy.hpp"
#include "wulff_clusters/errors.hpp"

using namespace wulff;
using testing::Gen;

TEST_CASE("point values") {
  CHECK(Anisotropy::euclidean().eval({3, 4}) == doctest::Approx(5.0));
  CHECK(Anisotropy::crystalline_l1().eval({1, 1}) == doctest::Approx(2.0));
  CHECK(Anisotropy::elliptic(2, 1).eval({1, 0}) == doctest::Approx(2.0));
  CHECK(Anisotropy::p_norm(4).eval({1, 1}) == doctest::Approx(std::pow(2.0, 0.25)));
}

TEST_CASE("gradients against closed forms") {
  const Vec2 g = Anisotropy::euclidean().gradient({0, 1});
  CHECK(g.x == doctest::Approx(0.0));
  CHECK(g.y == doctest::Approx(1.0));

  const Vec2 ge = Anisotropy::elliptic(2, 1).gradient({0, 1});
  CHECK(ge.x == doctest::Approx(0.0));
  CHECK(ge.y == doctest::Approx(1.0));

  // d/dx [sqrt(x^2 + e^2 r^2) + sqrt(y^2 + e^2 r^2)] at (1, 0)
  const double e = 0.1;
  const Vec2 gs = Anisotropy::smoothed_l1(e).gradient({1, 0});
  CHECK(gs.x == doctest::Approx(std::sqrt(1.0 + e * e) + e));
  CHECK(gs.y == doctest::Approx(0.0));
}

TEST_CASE("zero vectors and kinks are rejected") {
  CHECK_THROWS_AS(Anisotropy::euclidean().eval({0, 0}), Error);
  try {
    Anisotropy::crystalline_l1().gradient({1, 0});
    FAIL("expected NotDifferentiable");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::NotDifferentiable);
  }
  CHECK_FALSE(Anisotropy::crystalline_l1().is_differentiable_at({0, 1}));
  CHECK(Anisotropy::crystalline_l1().is_differentiable_at({1, 2}));
}

TEST_CASE("constructor preconditions") {
  CHECK_THROWS_AS(Anisotropy::elliptic(0, 1), Error);
  CHECK_THROWS_AS(Anisotropy::p_norm(1.0), Error);
  CHECK_THROWS_AS(Anisotropy::custom_fourier({1.0, 0.9}), Error);
  CHECK_NOTHROW(Anisotropy::custom_fourier({1.0, 0.05}));
}

TEST_CASE("validate") {
  CHECK(validate(Anisotropy::euclidean()).all());
  const auto l1 = validate(Anisotropy::crystalline_l1());
  CHECK_FALSE(l1.uniformly_convex);
  CHECK(l1.symmetric);
  CHECK(l1.convex);
  CHECK(validate(Anisotropy::smoothed_l1(0.05)).all());
  CHECK_THROWS_AS(validate(Anisotropy::euclidean(), 8), Error);
}

TEST_CASE("regularity flags") {
  CHECK(Anisotropy::euclidean().is_regular());
  CHECK(Anisotropy::elliptic(2, 1).is_regular());
  CHECK(Anisotropy::smoothed_l1(0.05).is_regular());
  CHECK_FALSE(Anisotropy::crystalline_l1().is_regular());
}

TEST_CASE("smooth approximation of l1") {
  const auto l1 = Anisotropy::crystalline_l1();
  const auto s = smooth_approximation(l1, 0.1);
  CHECK(s.anisotropy.kind() == AnisotropyKind::smoothed_l1);
  CHECK(s.sup_gap <= 0.1 * std::sqrt(2.0));
  double prev = 1e300;
  for (double eps : {0.2, 0.1, 0.05}) {
    const double gap = smooth_approximation(l1, eps).sup_gap;
    CHECK(gap < prev);
    prev = gap;
  }
  const auto id = smooth_approximation(Anisotropy::euclidean(), 0.1);
  CHECK(id.anisotropy == Anisotropy::euclidean());
  CHECK(id.sup_gap == 0.0);
  CHECK_THROWS_AS(smooth_approximation(l1, 0.0), Error);
}

TEST_CASE("directions") {
  CHECK(Direction::from_degrees(-90).degrees() == doctest::Approx(270.0));
  CHECK(normalize_angle(kTwoPi) == 0.0);
  CHECK(Direction::from_vector({0, 2}).degrees() == doctest::Approx(90.0));
  CHECK_THROWS_AS(Direction::from_vector({0, 0}), Error);
  Gen gen(3);
  for (int i = 0; i < 1000; ++i) {
    const Direction d = Direction::from_angle(gen.uniform(-100.0, 100.0));
    CHECK(std::abs(norm(d.vec()) - 1.0) <= 1e-14);
    CHECK(d.angle() >= 0.0);
    CHECK(d.angle() < kTwoPi);
  }
}

TEST_CASE("property: homogeneity, symmetry and convexity") {
  Gen gen(11);
  for (const auto& a : testing::all_kinds()) {
    CAPTURE(a.name());
    for (int i = 0; i < 1000; ++i) {
      const Vec2 v = gen.vector(), u = gen.vector();
      const double t = gen.uniform(1e-6, 1e3);
      CHECK(std::abs(a.eval(t * v) - t * a.eval(v)) <= 1e-9 * t * a.eval(v));
      CHECK(a.eval(v) > 0.0);
      CHECK(a.eval(-v) == doctest::Approx(a.eval(v)).epsilon(1e-14));
      CHECK(a.eval(0.5 * (u + v)) <= 0.5 * (a.eval(u) + a.eval(v)) + 1e-12 * (a.eval(u) + a.eval(v)));
    }
  }
}

TEST_CASE("property: Euler identity and finite-difference gradient") {
  Gen gen(12);
  for (const auto& a : testing::all_kinds()) {
    CAPTURE(a.name());
    for (int i = 0; i < 1000; ++i) {
      const Vec2 v = gen.off_axis();
      const Vec2 g = a.gradient(v);
      CHECK(std::abs(dot(g, v) - a.eval(v)) <= 1e-10);
      if (!a.is_regular()) continue;
      const double h = 1e-6;
      const Vec2 fd{(a.eval(v + Vec2{h, 0}) - a.eval(v - Vec2{h, 0})) / (2 * h),
                    (a.eval(v + Vec2{0, h}) - a.eval(v - Vec2{0, h})) / (2 * h)};
      const double tol = std::max(1e-6, 1e-4 * norm(g));
      CHECK(std::abs(fd.x - g.x) <= tol);
      CHECK(std::abs(fd.y - g.y) <= tol);
    }
  }
}

TEST_CASE("property: Hessian matches differences of the gradient") {
  Gen gen(13);
  for (const auto& a : testing::regular_family()) {
    CAPTURE(a.name());
    for (int i = 0; i < 200; ++i) {
      const Vec2 v = gen.off_axis(0.05);
      const Mat2 H = a.hessian(v);
      const double h = 1e-6;
      const Vec2 cx = (a.gradient(v + Vec2{h, 0}) - a.gradient(v - Vec2{h, 0})) / (2 * h);
      const Vec2 cy = (a.gradient(v + Vec2{0, h}) - a.gradient(v - Vec2{0, h})) / (2 * h);
      const double scale = std::max(1.0, std::abs(H.xx) + std::abs(H.yy));
      CHECK(std::abs(H.xx - cx.x) <= 1e-4 * scale);
      CHECK(std::abs(H.xy - cx.y) <= 1e-4 * scale);
      CHECK(std::abs(H.yy - cy.y) <= 1e-4 * scale);
      // degree -1 homogeneity of the Hessian: H v = 0
      const Vec2 hv = H * v;
      CHECK(norm(hv) <= 1e-8 * scale);
    }
  }
}

TEST_CASE("tangential Hessian is positive for regular kinds") {
  for (const auto& a : testing::regular_family()) {
    CAPTURE(a.name());
    for (int k = 0; k < 4096; ++k) {
      const double h = tangential_hessian(a, kTwoPi * k / 4096.0);
      // p_norm(4) degenerates on the axes
      if (a.kind() == AnisotropyKind::p_norm && k % 1024 == 0) CHECK(h == doctest::Approx(0.0));
      else CHECK(h > 0.0);
    }
  }
}

TEST_CASE("sup_gap of identical anisotropies is zero") {
  CHECK(sup_gap(Anisotropy::euclidean(), Anisotropy::euclidean()) == 0.0);
  CHECK(sup_gap(Anisotropy::euclidean(), Anisotropy::crystalline_l1()) == doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-6));
}
