#pragma once

#include <array>

#include "wulff_clusters/anisotropy.hpp"

namespace wulff {

// Three unit normals meeting at a triple junction. n_hat is the normal of
// the exterior interface; nu1 and nu2 are the interface normals ordered by
// counter-clockwise offset from n_hat. a, b, c are grad phi of n_hat, nu1,
// nu2 (points on the boundary of W_phi).
struct JunctionTriple {
  Direction n_hat;
  Direction nu1;
  Direction nu2;
  Vec2 a;
  Vec2 b;
  Vec2 c;
  double residual = 0.0;
};

// |grad phi(t0) + grad phi(t1) + grad phi(t2)|. Throws NotDifferentiable for
// crystalline_l1 on the axes.
double young_residual(const Anisotropy& a, const std::array<Direction, 3>& t);

// The unique unordered pair {nu1, nu2} with
// grad phi(n_hat) + grad phi(nu1) + grad phi(nu2) = 0, found by Newton's
// method in the two angles seeded at n_hat +- 120 degrees, with restarts from
// a coarse grid. Requires a regular, symmetric anisotropy.
JunctionTriple solve_young_pair(const Anisotropy& a, Direction n_hat);

// Junction triples of the Reuleaux-type triod: exterior normals n_hat, nu1,
// nu2 (from solve_young_pair(a, n_hat)) in that order.
std::array<JunctionTriple, 3> triod_normals(const Anisotropy& a, Direction n_hat);

// Target residual for solved triples.
inline constexpr double kYoungTolerance = 1e-10;

}  // namespace wulff
