#include "wulff_clusters/junctions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "wulff_clusters/errors.hpp"

namespace wulff {

namespace {

Vec2 unit(double t) { return {std::cos(t), std::sin(t)}; }

struct NewtonOutcome {
  double t1;
  double t2;
  double residual;
};

// Damped Newton on G(t1, t2) = grad phi(nu(t1)) + grad phi(nu(t2)) + A.
NewtonOutcome newton(const Anisotropy& a, Vec2 target, double t1, double t2) {
  auto residual_vec = [&](double s1, double s2) { return a.gradient(unit(s1)) + a.gradient(unit(s2)) + target; };
  Vec2 g = residual_vec(t1, t2);
  double r = norm(g);
  for (int it = 0; it < 100 && r > 1e-15; ++it) {
    const Vec2 u1 = unit(t1);
    const Vec2 u2 = unit(t2);
    const Vec2 col1 = a.hessian(u1) * rotate_ccw(u1);
    const Vec2 col2 = a.hessian(u2) * rotate_ccw(u2);
    const double det = cross(col1, col2);
    if (!std::isfinite(det) || std::abs(det) < 1e-300) break;
    // Solve [col1 col2] * step = -g.
    const double s1 = -cross(g, col2) / det;
    const double s2 = -cross(col1, g) / det;
    double damping = 1.0;
    bool improved = false;
    for (int ls = 0; ls < 40; ++ls) {
      const double n1 = t1 + damping * s1;
      const double n2 = t2 + damping * s2;
      const Vec2 gn = residual_vec(n1, n2);
      const double rn = norm(gn);
      if (rn < r) {
        t1 = n1;
        t2 = n2;
        g = gn;
        r = rn;
        improved = true;
        break;
      }
      damping *= 0.5;
    }
    if (!improved) break;
  }
  return {t1, t2, r};
}

bool separated(double a, double b) {
  const double d = normalize_angle(a - b);
  return std::min(d, kTwoPi - d) > 1e-6;
}

}  // namespace

double young_residual(const Anisotropy& a, const std::array<Direction, 3>& t) {
  return norm(a.gradient(t[0].vec()) + a.gradient(t[1].vec()) + a.gradient(t[2].vec()));
}

JunctionTriple solve_young_pair(const Anisotropy& a, Direction n_hat) {
  if (!a.is_regular() || !a.is_symmetric())
    throw Error(ErrorCode::NotRegular, a.name() + " is not a regular symmetric anisotropy");
  const Vec2 target = a.gradient(n_hat.vec());
  const double base = n_hat.angle();
  constexpr double kThird = kTwoPi / 3.0;

  auto accept = [&](const NewtonOutcome& o) {
    return o.residual <= kYoungTolerance && separated(o.t1, o.t2) && separated(o.t1, base) &&
           separated(o.t2, base);
  };

  NewtonOutcome best = newton(a, target, base + kThird, base - kThird);
  if (!accept(best)) {
    // Restart from the 32 best points of a coarse grid in (t1, t2).
    struct Seed {
      double t1, t2, r;
    };
    std::vector<Seed> seeds;
    constexpr int kGrid = 48;
    for (int i = 1; i < kGrid; ++i) {
      for (int j = i + 1; j < kGrid; ++j) {
        const double t1 = base + kTwoPi * i / kGrid;
        const double t2 = base + kTwoPi * j / kGrid;
        seeds.push_back({t1, t2, norm(a.gradient(unit(t1)) + a.gradient(unit(t2)) + target)});
      }
    }
    std::partial_sort(seeds.begin(), seeds.begin() + 32, seeds.end(),
                      [](const Seed& x, const Seed& y) { return x.r < y.r; });
    for (int s = 0; s < 32 && !accept(best); ++s) {
      const NewtonOutcome o = newton(a, target, seeds[s].t1, seeds[s].t2);
      if (o.residual < best.residual || accept(o)) best = o;
    }
  }
  if (!accept(best))
    throw Error(ErrorCode::NoConvergence,
                "Young pair solver failed for " + a.name() + " (residual " + std::to_string(best.residual) + ")");

  Direction d1 = Direction::from_angle(best.t1);
  Direction d2 = Direction::from_angle(best.t2);
  if (ccw_offset(n_hat, d2) < ccw_offset(n_hat, d1)) std::swap(d1, d2);
  JunctionTriple triple{n_hat, d1, d2, target, a.gradient(d1.vec()), a.gradient(d2.vec()), 0.0};
  triple.residual = norm(triple.a + triple.b + triple.c);
  return triple;
}

std::array<JunctionTriple, 3> triod_normals(const Anisotropy& a, Direction n_hat) {
  const JunctionTriple t = solve_young_pair(a, n_hat);
  // The same three normals, each in turn playing the exterior role.
  auto relabel = [&](Direction ext, Direction p, Direction q, Vec2 ga, Vec2 gp, Vec2 gq) {
    JunctionTriple r{ext, p, q, ga, gp, gq, 0.0};
    if (ccw_offset(ext, q) < ccw_offset(ext, p)) {
      std::swap(r.nu1, r.nu2);
      std::swap(r.b, r.c);
    }
    r.residual = norm(r.a + r.b + r.c);
    return r;
  };
  return {t, relabel(t.nu1, t.nu2, t.n_hat, t.b, t.c, t.a), relabel(t.nu2, t.n_hat, t.nu1, t.c, t.a, t.b)};
}

}  // namespace wulff
