#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "wulff_clusters/anisotropy.hpp"
#include "wulff_clusters/geometry.hpp"

namespace wulff {

inline constexpr std::size_t kDefaultResolution = 1024;

enum class Provenance { gradient_map, halfplane_intersection };

// Closed counter-clockwise sampling of the boundary of lambda * W_phi.
// For gradient_map boundaries normals[k] is the unit normal nu_k with
// vertices[k] = lambda * grad phi(nu_k); for halfplane boundaries it is the
// outward normal of the edge leaving vertices[k].
struct WulffBoundary {
  std::vector<Vec2> vertices;
  std::vector<Vec2> normals;
  double lambda = 1.0;
  Provenance provenance = Provenance::gradient_map;
};

// Vertices grad phi(nu_k) for n equally spaced normals. Requires a regular
// anisotropy (NotRegular otherwise) and n >= 64.
WulffBoundary boundary_by_gradient_map(const Anisotropy& a, std::size_t n = kDefaultResolution);

// Intersection of the half-planes {x . y_k <= phi(y_k)} over n equally
// spaced unit vectors y_k, n >= 4.
// Works for every anisotropy, including crystalline ones.
WulffBoundary boundary_by_halfplane_intersection(const Anisotropy& a, std::size_t n);

// Shoelace area.
double area(const WulffBoundary& w);

// Anisotropic perimeter of a polyline: sum over segments of
// phi(R_{-90}(v - u)), i.e. phi of the outward normal for a counter-clockwise
// curve, times the segment length. Throws DuplicateVertex on repeated
// consecutive vertices.
double aniso_perimeter(const Anisotropy& a, std::span<const Vec2> curve, bool closed = false);

// Rescales so the enclosed area equals m (m > 0).
WulffBoundary scale_to_area(const WulffBoundary& w, double m);

double diameter(const WulffBoundary& w);

// phi*(x) = sup over unit nu of x . nu / phi(nu): sampled on `grid` equally
// spaced angles, then refined by golden-section search around the best
// sample.
double dual_norm(const Anisotropy& a, Vec2 x, std::size_t grid = kDefaultResolution);

// Forms of gamma(d) = phi(R_{-90} d) when phi is a sum of square-rooted
// quadratic forms.
std::optional<std::vector<kernels::QuadraticForm>> tangent_forms(const Anisotropy& a);

}  // namespace wulff
