#pragma once

#include <array>
#include <vector>

#include "wulff_clusters/anisotropy.hpp"
#include "wulff_clusters/junctions.hpp"
#include "wulff_clusters/wulff.hpp"

namespace wulff {

enum class ClusterKind { lens, triod };

const char* to_string(ClusterKind kind);

// Convex region bounded by two arcs of lambda * W_phi meeting at two Young
// junctions. arcs[0] runs from vertices[0] to vertices[1] and faces -n_hat;
// arcs[1] runs back and faces +n_hat, so the boundary is counter-clockwise.
// The chord between the vertices is bisected by the origin.
struct LensShape {
  std::array<Vec2, 2> vertices;
  std::array<std::vector<Vec2>, 2> arcs;
  double lambda = 1.0;
  JunctionTriple triple;

  std::vector<Vec2> boundary() const;
};

// Anisotropic Reuleaux triangle. vertices[i] carries exterior normal
// n_hat, nu1, nu2 for i = 0, 1, 2; arcs[i] runs counter-clockwise from
// vertices[i] to vertices[(i+1) % 3]. Placed so the three exterior rays lie
// on lines through the origin.
struct TriodShape {
  std::array<Vec2, 3> vertices;
  std::array<std::vector<Vec2>, 3> arcs;
  std::array<Vec2, 3> ray_directions;
  double lambda = 1.0;
  std::array<JunctionTriple, 3> triples;

  std::vector<Vec2> boundary() const;
};

struct Chamber {
  int label = 0;  // 1 is the finite chamber
  bool finite = false;
};

// Polyline between two chambers; R_{-90} of its tangent points from chamber
// `first` into chamber `second`, and first < second.
struct Interface {
  int first = 0;
  int second = 0;
  std::vector<Vec2> points;
};

struct Cluster {
  ClusterKind kind = ClusterKind::lens;
  std::vector<Chamber> chambers;
  std::vector<Interface> interfaces;
  std::vector<Vec2> junctions;
  std::vector<JunctionTriple> junction_triples;  // per junction, in local orientation
  std::vector<Vec2> ray_directions;             // per junction, pointing to the anchor
  std::vector<Vec2> anchors;                    // per junction, on the circle of radius R
  Direction n_hat;
  double radius = 0.0;
  double mass = 0.0;
  double lambda = 1.0;

  // Counter-clockwise boundary of E1 (no repeated closing vertex).
  std::vector<Vec2> finite_boundary() const;
  // Label of the chamber containing p under the analytic partition
  // (rays extended beyond the ball).
  int chamber_at(Vec2 p) const;
  // Same, ignoring E1: the infinite chamber the exterior configuration
  // assigns to p.
  int infinite_chamber_at(Vec2 p) const;
};

// Arcs are sampled uniformly in normal angle with `resolution` segments per
// full turn (at least 8 per arc); junction endpoints are exact.
LensShape build_lens(const Anisotropy& a, Direction n_hat, double m,
                     std::size_t resolution = kDefaultResolution);
TriodShape build_triod(const Anisotropy& a, Direction n_hat, double m,
                       std::size_t resolution = kDefaultResolution);

// Lens joined to two half-lines of normal n_hat ending on the circle of
// radius R. Throws RadiusTooSmall unless R > 2 * diam(Wulff shape of area m).
Cluster standard_lens_cluster(const Anisotropy& a, Direction n_hat, double m, double R,
                              std::size_t resolution = kDefaultResolution);
Cluster standard_triod_cluster(const Anisotropy& a, Direction n_hat, double m, double R,
                               std::size_t resolution = kDefaultResolution);
Cluster standard_cluster(ClusterKind kind, const Anisotropy& a, Direction n_hat, double m,
                         double R, std::size_t resolution = kDefaultResolution);

// Same construction without the radius precondition; only requires the
// finite chamber to fit strictly inside the ball.
Cluster standard_cluster_unchecked(ClusterKind kind, const Anisotropy& a, Direction n_hat,
                                   double m, double R,
                                   std::size_t resolution = kDefaultResolution);

// Sum over interfaces of their anisotropic perimeter.
double cluster_perimeter(const Anisotropy& a, const Cluster& c);

struct PerimeterCheck {
  double interface_sum = 0.0;
  // (P(union) + sum_i P(E_i)) / 2 computed chamber by chamber.
  double chamber_half_sum = 0.0;
  bool consistent = false;  // within 1e-9 (relative to the total)
};
PerimeterCheck cluster_perimeter_check(const Anisotropy& a, const Cluster& c);

// Anisotropic perimeter of the interfaces inside the disk B(center, r).
double cluster_perimeter_in_ball(const Anisotropy& a, const Cluster& c, Vec2 center, double r);

// Arc part of the perimeter (interfaces touching E1).
double finite_chamber_perimeter(const Anisotropy& a, const Cluster& c);

struct ClusterReport {
  bool junction_degrees_ok = false;   // every junction has exactly 3 endpoints
  bool non_crossing = false;          // no two interface segments cross
  double area_rel_error = 0.0;        // |area(E1) - m| / m
  double max_straight_deviation = 0.0;  // infinite/infinite interfaces, / R
  double max_anchor_error = 0.0;      // ||p_i| - R| / R
  double max_young_residual = 0.0;
  bool finite_chamber_convex = false;

  bool ok() const {
    return junction_degrees_ok && non_crossing && area_rel_error <= 1e-8 &&
           max_straight_deviation <= 1e-9 && max_anchor_error <= 1e-12 &&
           max_young_residual <= kYoungTolerance && finite_chamber_convex;
  }
};
ClusterReport check_cluster(const Anisotropy& a, const Cluster& c);

// Direction n_hat in [0, pi) minimising the standard cluster's perimeter in
// B_R: 128-point scan, then golden-section refinement.
Direction minimizing_direction(const Anisotropy& a, ClusterKind kind, double m, double R,
                               std::size_t resolution = 256);

}  // namespace wulff
