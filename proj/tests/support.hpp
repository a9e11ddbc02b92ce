#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "wulff_clusters/anisotropy.hpp"
#include "wulff_clusters/geometry.hpp"

namespace wulff::testing {

// Small generator toolkit for the property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  double angle() { return uniform(0.0, kTwoPi); }
  Vec2 unit() {
    const double t = angle();
    return {std::cos(t), std::sin(t)};
  }
  // Nonzero vector with log-uniform length in [1e-3, 1e3].
  Vec2 vector() { return std::pow(10.0, uniform(-3.0, 3.0)) * unit(); }
  // Unit vector at least `margin` radians away from both axes.
  Vec2 off_axis(double margin = 1e-3) {
    for (;;) {
      const Vec2 u = unit();
      if (std::abs(u.x) > std::sin(margin) && std::abs(u.y) > std::sin(margin)) return u;
    }
  }

 private:
  std::mt19937_64 rng_;
};

inline std::vector<Anisotropy> regular_family() {
  return {Anisotropy::euclidean(), Anisotropy::elliptic(2.0, 1.0), Anisotropy::p_norm(4.0),
          Anisotropy::smoothed_l1(0.05)};
}

inline std::vector<Anisotropy> all_kinds() {
  return {Anisotropy::euclidean(),        Anisotropy::elliptic(2.0, 1.0), Anisotropy::p_norm(4.0),
          Anisotropy::crystalline_l1(),   Anisotropy::smoothed_l1(0.05),
          Anisotropy::custom_fourier({1.0, 0.05})};
}

inline double degrees_between(Vec2 a, Vec2 b) {
  return std::atan2(std::abs(cross(a, b)), dot(a, b)) * 180.0 / kPi;
}

}  // namespace wulff::testing
