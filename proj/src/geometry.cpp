#include "wulff_clusters/geometry.hpp"

#include <algorithm>
#include <limits>

#include "wulff_clusters/errors.hpp"
#include "wulff_clusters/kernels.hpp"

namespace wulff {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::NotDifferentiable: return "NotDifferentiable";
    case ErrorCode::UnsupportedKind: return "UnsupportedKind";
    case ErrorCode::NotRegular: return "NotRegular";
    case ErrorCode::DegenerateIntersection: return "DegenerateIntersection";
    case ErrorCode::DuplicateVertex: return "DuplicateVertex";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::RadiusTooSmall: return "RadiusTooSmall";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ConstraintUnsatisfiable: return "ConstraintUnsatisfiable";
    case ErrorCode::TopologyMismatch: return "TopologyMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Vec2 unit_at_fraction(std::size_t k, std::size_t n) {
  k %= n;
  if ((4 * k) % n == 0) {
    switch ((4 * k) / n) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -1.0};
    }
  }
  const double t = kTwoPi * static_cast<double>(k) / static_cast<double>(n);
  return {std::cos(t), std::sin(t)};
}

double signed_area(std::span<const Vec2> polygon) {
  return 0.5 * kernels::shoelace_twice_area(polygon);
}

double polyline_length(std::span<const Vec2> polyline, bool closed) {
  double len = 0.0;
  for (std::size_t i = 0; i + 1 < polyline.size(); ++i) len += norm(polyline[i + 1] - polyline[i]);
  if (closed && polyline.size() > 2) len += norm(polyline.front() - polyline.back());
  return len;
}

double convex_diameter(std::span<const Vec2> p) {
  const std::size_t n = p.size();
  if (n < 2) return 0.0;
  if (n == 2) return norm(p[1] - p[0]);
  auto area2 = [&](std::size_t i, std::size_t j, std::size_t k) {
    return std::abs(cross(p[j] - p[i], p[k] - p[i]));
  };
  double best = 0.0;
  std::size_t j = 1;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t i1 = (i + 1) % n;
    // Advance the antipodal pointer while the triangle on edge (i, i1) grows.
    for (std::size_t guard = 0; guard < n; ++guard) {
      const std::size_t j1 = (j + 1) % n;
      if (area2(i, i1, j1) > area2(i, i1, j)) {
        j = j1;
      } else {
        break;
      }
    }
    best = std::max({best, norm(p[j] - p[i]), norm(p[j] - p[i1])});
    const std::size_t j1 = (j + 1) % n;
    best = std::max({best, norm(p[j1] - p[i]), norm(p[j1] - p[i1])});
  }
  return best;
}

double pairwise_diameter(std::span<const Vec2> points) {
  double best = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j)
      best = std::max(best, norm(points[j] - points[i]));
  return best;
}

bool is_convex_ccw(std::span<const Vec2> p, double tol) {
  const std::size_t n = p.size();
  if (n < 3) return false;
  double scale = 0.0;
  for (const auto& v : p) scale = std::max({scale, std::abs(v.x), std::abs(v.y)});
  const double threshold = -tol * scale * scale;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 e0 = p[(i + 1) % n] - p[i];
    const Vec2 e1 = p[(i + 2) % n] - p[(i + 1) % n];
    if (cross(e0, e1) < threshold) return false;
  }
  return true;
}

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return norm(p - (a + t * ab));
}

double point_polyline_distance(Vec2 p, std::span<const Vec2> poly, bool closed) {
  if (poly.empty()) return std::numeric_limits<double>::infinity();
  if (poly.size() == 1) return norm(p - poly[0]);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < poly.size(); ++i)
    best = std::min(best, point_segment_distance(p, poly[i], poly[i + 1]));
  if (closed) best = std::min(best, point_segment_distance(p, poly.back(), poly.front()));
  return best;
}

double polyline_hausdorff(std::span<const Vec2> a, bool a_closed, std::span<const Vec2> b,
                          bool b_closed) {
  double h = 0.0;
  for (const auto& p : a) h = std::max(h, point_polyline_distance(p, b, b_closed));
  for (const auto& p : b) h = std::max(h, point_polyline_distance(p, a, a_closed));
  return h;
}

bool segments_cross(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  const double d1 = cross(b - a, c - a);
  const double d2 = cross(b - a, d - a);
  const double d3 = cross(d - c, a - c);
  const double d4 = cross(d - c, b - c);
  return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

bool point_in_polygon(Vec2 p, std::span<const Vec2> poly) {
  bool inside = false;
  const std::size_t n = poly.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2 a = poly[i];
    const Vec2 b = poly[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x) inside = !inside;
    }
  }
  return inside;
}

std::optional<double> ray_circle_exit(Vec2 origin, Vec2 dir, double radius) {
  const double a = dot(dir, dir);
  const double b = 2.0 * dot(origin, dir);
  const double c = dot(origin, origin) - radius * radius;
  const double disc = b * b - 4.0 * a * c;
  if (a == 0.0 || disc < 0.0) return std::nullopt;
  const double sq = std::sqrt(disc);
  // Larger root, computed without cancellation.
  const double s = b >= 0.0 ? (2.0 * -c) / (b + sq) : (-b + sq) / (2.0 * a);
  if (s < 0.0) return std::nullopt;
  return s;
}

std::optional<std::pair<double, double>> clip_segment_to_disk(Vec2 a, Vec2 b, Vec2 center,
                                                              double r) {
  const Vec2 d = b - a;
  const Vec2 f = a - center;
  const double qa = dot(d, d);
  const double qb = 2.0 * dot(f, d);
  const double qc = dot(f, f) - r * r;
  if (qa == 0.0) {
    if (qc <= 0.0) return std::make_pair(0.0, 0.0);
    return std::nullopt;
  }
  const double disc = qb * qb - 4.0 * qa * qc;
  if (disc <= 0.0) return std::nullopt;
  const double sq = std::sqrt(disc);
  const double t0 = std::max(0.0, (-qb - sq) / (2.0 * qa));
  const double t1 = std::min(1.0, (-qb + sq) / (2.0 * qa));
  if (t0 >= t1) return std::nullopt;
  return std::make_pair(t0, t1);
}

double max_chord_deviation(std::span<const Vec2> poly) {
  if (poly.size() < 3) return 0.0;
  double dev = 0.0;
  for (std::size_t i = 1; i + 1 < poly.size(); ++i)
    dev = std::max(dev, point_segment_distance(poly[i], poly.front(), poly.back()));
  return dev;
}

}  // namespace wulff
