#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "wulff_clusters/errors.hpp"
#include "wulff_clusters/verify.hpp"

namespace wulff {

namespace {

// C-infinity bump supported on [0, 1), equal to 1 at 0.
double bump(double t) { return t >= 1.0 ? 0.0 : std::exp(1.0 - 1.0 / (1.0 - t * t)); }

// Offsets the interior vertices of `chain` along their discrete outward
// normals by a common distance so that area(E1) = m again.
void restore_area(const DiscreteEnergyProblem& p, const DiscreteEnergyProblem::Chain& chain,
                  std::vector<double>& x) {
  const double m = p.mass();
  const auto& vs = chain.vertices;
  std::vector<Vec2> normals(vs.size());
  for (std::size_t k = 1; k + 1 < vs.size(); ++k) {
    const Vec2 t = p.vertex(x, vs[k + 1]) - p.vertex(x, vs[k - 1]);
    normals[k] = rotate_cw(t) / norm(t);
  }
  std::vector<double> ga(x.size());
  for (int it = 0; it < 50; ++it) {
    const double a = p.area(x, ga);
    if (std::abs(a - m) <= 1e-14 * m) return;
    double slope = 0.0;
    for (std::size_t k = 1; k + 1 < vs.size(); ++k) {
      const auto i = static_cast<std::size_t>(vs[k]);
      slope += ga[2 * i] * normals[k].x + ga[2 * i + 1] * normals[k].y;
    }
    if (slope == 0.0) return;
    const double t = (m - a) / slope;
    for (std::size_t k = 1; k + 1 < vs.size(); ++k) {
      const auto i = static_cast<std::size_t>(vs[k]);
      x[2 * i] += t * normals[k].x;
      x[2 * i + 1] += t * normals[k].y;
    }
  }
}

}  // namespace

PerturbationReport perturbation_test(const Anisotropy& a, const Cluster& c, std::size_t trials, double amplitude,
                                     std::uint64_t seed, PerturbationKind kind) {
  if (!(amplitude >= 0.0) || amplitude > 0.1 * c.radius)
    throw Error(ErrorCode::InvalidArgument, "amplitude must lie in [0, 0.1 R]");
  const DiscreteEnergyProblem p = DiscreteEnergyProblem::from_cluster(a, c);
  const std::vector<double>& x0 = p.initial();
  const double e0 = p.energy(x0);

  std::vector<const DiscreteEnergyProblem::Chain*> arcs;
  for (const auto& chain : p.chains())
    if (chain.first == 1) arcs.push_back(&chain);

  const auto e1 = p.finite_boundary(x0);
  const double diam = pairwise_diameter(e1);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  PerturbationReport report;
  report.trials = trials;
  report.energy_standard = e0;
  report.min_gap = std::numeric_limits<double>::infinity();
  report.max_gap = -std::numeric_limits<double>::infinity();
  const std::size_t nf = p.free_vertex_count();

  for (std::size_t trial = 0; trial < trials; ++trial) {
    std::vector<double> x = x0;
    if (kind == PerturbationKind::translation) {
      const Vec2 shift = amplitude * c.ray_directions.front();
      for (std::size_t i = 0; i < nf; ++i) {
        x[2 * i] += shift.x;
        x[2 * i + 1] += shift.y;
      }
    } else {
      const Vec2 anchor = e1[std::min(static_cast<std::size_t>(unit(rng) * e1.size()), e1.size() - 1)];
      // The offset stays inside the support so the anchor vertex always moves.
      const double t = kTwoPi * unit(rng);
      const Vec2 center = anchor + 0.25 * diam * std::sqrt(unit(rng)) * Vec2{std::cos(t), std::sin(t)};
      const double radius = diam * (0.3 + 0.7 * unit(rng));
      const double angle = kTwoPi * unit(rng);
      const Vec2 dir = amplitude * (0.1 + 0.9 * unit(rng)) * Vec2{std::cos(angle), std::sin(angle)};
      for (std::size_t i = 0; i < nf; ++i) {
        const Vec2 q{x[2 * i], x[2 * i + 1]};
        const double w = bump(norm(q - center) / radius);
        x[2 * i] += w * dir.x;
        x[2 * i + 1] += w * dir.y;
      }
    }
    const auto pick = static_cast<std::size_t>(unit(rng) * static_cast<double>(arcs.size()));
    restore_area(p, *arcs[std::min(pick, arcs.size() - 1)], x);
    const double gap = p.energy(x) - e0;
    report.min_gap = std::min(report.min_gap, gap);
    report.max_gap = std::max(report.max_gap, gap);
    if (gap < -1e-9) ++report.violations;
  }
  if (trials == 0) report.min_gap = report.max_gap = 0.0;
  return report;
}

}  // namespace wulff
