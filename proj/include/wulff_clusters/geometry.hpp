#pragma once

// Planar vector type and the polyline/polygon utilities shared by the
// construction and verification code.

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace wulff {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2& operator+=(Vec2 o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr Vec2& operator-=(Vec2 o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  constexpr Vec2& operator*=(double s) {
    x *= s;
    y *= s;
    return *this;
  }
  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend constexpr Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
  friend constexpr Vec2 operator/(Vec2 a, double s) { return {a.x / s, a.y / s}; }
  friend constexpr bool operator==(Vec2 a, Vec2 b) = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

// Rotation by -90 degrees. For a counter-clockwise curve this maps the
// tangent onto the outward normal.
constexpr Vec2 rotate_cw(Vec2 a) { return {a.y, -a.x}; }
// Rotation by +90 degrees.
constexpr Vec2 rotate_ccw(Vec2 a) { return {-a.y, a.x}; }

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Unit vector at angle 2*pi*k/n with exact values at quarter turns.
Vec2 unit_at_fraction(std::size_t k, std::size_t n);

// Signed area (positive for counter-clockwise), polygon implicitly closed.
double signed_area(std::span<const Vec2> polygon);

// Euclidean length of an open (or closed) polyline.
double polyline_length(std::span<const Vec2> polyline, bool closed = false);

// Largest pairwise distance between the vertices of a convex
// counter-clockwise polygon (rotating calipers, O(n)).
double convex_diameter(std::span<const Vec2> polygon);

// Brute force O(n^2) pairwise diameter.
double pairwise_diameter(std::span<const Vec2> points);

// True when every turn of the closed polygon is a left turn within the
// tolerance `-tol * scale^2`.
bool is_convex_ccw(std::span<const Vec2> polygon, double tol = 1e-12);

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b);

// Distance from p to the polyline (segments between consecutive points).
double point_polyline_distance(Vec2 p, std::span<const Vec2> polyline, bool closed = false);

// Symmetric Hausdorff distance between two polylines, measured between
// vertices of one and segments of the other (both ways).
double polyline_hausdorff(std::span<const Vec2> a, bool a_closed, std::span<const Vec2> b,
                          bool b_closed);

// Proper intersection of segments [a,b] and [c,d]; shared endpoints do not
// count.
bool segments_cross(Vec2 a, Vec2 b, Vec2 c, Vec2 d);

// Even-odd point-in-polygon test.
bool point_in_polygon(Vec2 p, std::span<const Vec2> polygon);

// Smallest s >= 0 with |origin + s*dir| = radius, for origin inside the disk.
std::optional<double> ray_circle_exit(Vec2 origin, Vec2 dir, double radius);

// Portion of segment [a,b] inside the disk B(center, r), as a parameter
// interval [t0,t1] in [0,1]. Empty when the segment misses the disk.
std::optional<std::pair<double, double>> clip_segment_to_disk(Vec2 a, Vec2 b, Vec2 center,
                                                              double r);

// Largest distance of the interior vertices from the chord joining the
// endpoints.
double max_chord_deviation(std::span<const Vec2> polyline);

}  // namespace wulff
