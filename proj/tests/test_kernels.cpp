#include <doctest.h>

#include <cmath>
#include <vector>

#include "support.hpp"
#include "wulff_clusters/kernels.hpp"

using namespace wulff;
namespace k = wulff::kernels;

namespace {

struct IsaGuard {
  ~IsaGuard() { k::force_isa(std::nullopt); }
};

std::vector<Vec2> random_polygon(testing::Gen& gen, std::size_t n) {
  std::vector<Vec2> p(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = kTwoPi * static_cast<double>(i) / static_cast<double>(n);
    const double r = gen.uniform(0.5, 2.0);
    p[i] = {r * std::cos(t) + 3.0, r * std::sin(t) - 1.0};
  }
  return p;
}

}  // namespace

TEST_CASE("shoelace of the unit square") {
  const std::vector<Vec2> sq{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  CHECK(k::scalar::shoelace_twice_area(sq) == doctest::Approx(2.0));
  CHECK(k::shoelace_twice_area(sq) == doctest::Approx(2.0));
  CHECK(k::shoelace_twice_area(std::span<const Vec2>{}) == 0.0);
}

TEST_CASE("sqrt_form_energy with the identity form sums lengths") {
  const std::vector<double> dx{3.0, 0.0, -1.0}, dy{4.0, 0.0, 0.0};
  const std::vector<k::QuadraticForm> id{{1.0, 0.0, 1.0}};
  std::vector<double> gx(3), gy(3);
  CHECK(k::scalar::sqrt_form_energy(dx, dy, id, gx, gy) == doctest::Approx(6.0));
  CHECK(gx[0] == doctest::Approx(0.6));
  CHECK(gy[0] == doctest::Approx(0.8));
  // zero-length edge
  CHECK(gx[1] == 0.0);
  CHECK(gy[1] == 0.0);
}

#if defined(WULFF_HAVE_AVX2_KERNELS)
TEST_CASE("avx2 kernels agree with the scalar reference") {
  if (k::detected_isa() != k::Isa::avx2) {
    MESSAGE("cpu without avx2; equivalence not exercised");
    return;
  }
  testing::Gen gen(7);
  for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 31u, 64u, 1001u}) {
    const auto poly = random_polygon(gen, n);
    const double s = k::scalar::shoelace_twice_area(poly);
    const double v = k::avx2::shoelace_twice_area(poly);
    CHECK(v == doctest::Approx(s).epsilon(1e-13).scale(1.0));

    std::vector<double> dx(n), dy(n);
    for (std::size_t i = 0; i < n; ++i) {
      dx[i] = gen.uniform(-2.0, 2.0);
      dy[i] = gen.uniform(-2.0, 2.0);
    }
    if (n > 2) dx[2] = dy[2] = 0.0;
    for (const auto& forms : {std::vector<k::QuadraticForm>{{4.0, 0.0, 1.0}},
                              std::vector<k::QuadraticForm>{{1.0025, 0.0, 0.0025}, {0.0025, 0.0, 1.0025}}}) {
      std::vector<double> gxs(n), gys(n), gxv(n), gyv(n);
      const double es = k::scalar::sqrt_form_energy(dx, dy, forms, gxs, gys);
      const double ev = k::avx2::sqrt_form_energy(dx, dy, forms, gxv, gyv);
      CHECK(ev == doctest::Approx(es).epsilon(1e-13));
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(gxv[i] == doctest::Approx(gxs[i]).epsilon(1e-13));
        CHECK(gyv[i] == doctest::Approx(gys[i]).epsilon(1e-13));
      }
      // energy only
      CHECK(k::avx2::sqrt_form_energy(dx, dy, forms, {}, {}) == doctest::Approx(es).epsilon(1e-13));
    }
  }
}
#endif

TEST_CASE("forced dispatch") {
  IsaGuard guard;
  k::force_isa(k::Isa::scalar);
  CHECK(k::active_isa() == k::Isa::scalar);
  k::force_isa(std::nullopt);
  CHECK(k::active_isa() == k::detected_isa());
  CHECK(k::to_string(k::Isa::scalar) == "scalar");
}
