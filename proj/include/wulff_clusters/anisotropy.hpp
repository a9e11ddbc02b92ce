#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wulff_clusters/geometry.hpp"
#include "wulff_clusters/kernels.hpp"

namespace wulff {

// Unit vector stored by its angle in [0, 2*pi) with cached components.
class Direction {
 public:
  Direction() : Direction(0.0) {}
  static Direction from_angle(double radians) { return Direction(radians); }
  static Direction from_degrees(double degrees);
  static Direction from_vector(Vec2 v);

  double angle() const { return angle_; }
  double degrees() const;
  Vec2 vec() const { return unit_; }
  Direction opposite() const { return Direction(angle_ + kPi); }

 private:
  explicit Direction(double radians);

  double angle_;
  Vec2 unit_;
};

// Maps any angle to [0, 2*pi); an exact 2*pi maps to 0.
double normalize_angle(double radians);
// Counter-clockwise angular offset of `to` from `from`, in [0, 2*pi).
double ccw_offset(Direction from, Direction to);

// Symmetric 2x2 matrix.
struct Mat2 {
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;

  Vec2 operator*(Vec2 v) const { return {xx * v.x + xy * v.y, xy * v.x + yy * v.y}; }
};

enum class AnisotropyKind {
  euclidean,
  elliptic,
  p_norm,
  crystalline_l1,
  smoothed_l1,
  custom_fourier,
};

const char* to_string(AnisotropyKind kind);

// A positively 1-homogeneous convex density phi on R^2 \ {0}. Values are
// immutable; all member functions are thread-safe.
class Anisotropy {
 public:
  static Anisotropy euclidean();
  // phi(v) = sqrt(a^2 v_x^2 + b^2 v_y^2); the Wulff shape is the ellipse
  // with semi-axes a and b.
  static Anisotropy elliptic(double a, double b);
  // phi(v) = (|v_x|^p + |v_y|^p)^(1/p), p > 1.
  static Anisotropy p_norm(double p);
  // phi(v) = |v_x| + |v_y|; the Wulff shape is the square [-1,1]^2.
  static Anisotropy crystalline_l1();
  // phi(v) = sqrt(v_x^2 + eps^2 |v|^2) + sqrt(v_y^2 + eps^2 |v|^2).
  static Anisotropy smoothed_l1(double eps);
  // phi(r, theta) = r * (c_0 + sum_k c_k cos(2 k theta)); coeffs[k] holds c_k.
  // Rejects coefficient sets that are not positive and convex on the circle.
  static Anisotropy custom_fourier(std::vector<double> coeffs);

  AnisotropyKind kind() const { return kind_; }
  const std::vector<double>& params() const { return params_; }
  // Canonical CLI spelling, e.g. "elliptic:2,1".
  std::string name() const;

  // Throws ZeroVector for |v| < 1e-300.
  double eval(Vec2 v) const;
  // Throws ZeroVector / NotDifferentiable (crystalline_l1 on the axes,
  // within angular tolerance 1e-12).
  Vec2 gradient(Vec2 v) const;
  // Analytic where available; custom_fourier uses symmetric finite
  // differences of the gradient with h = 1e-5 |v|.
  Mat2 hessian(Vec2 v) const;

  bool is_symmetric() const { return true; }
  // C^2 away from the origin, strictly convex and symmetric.
  bool is_regular() const;
  bool is_differentiable_at(Vec2 v) const;

  // For kinds of the form sum_k sqrt(v^T Q_k v), the forms Q_k.
  std::optional<std::vector<kernels::QuadraticForm>> quadratic_forms() const;

  // Extremes of phi on the unit circle, sampled.
  double max_on_circle(std::size_t samples = 4096) const;
  double min_on_circle(std::size_t samples = 4096) const;

  friend bool operator==(const Anisotropy&, const Anisotropy&) = default;

 private:
  Anisotropy(AnisotropyKind kind, std::vector<double> params);

  double fourier_profile(double theta, double* d1, double* d2) const;

  AnisotropyKind kind_;
  std::vector<double> params_;
};

struct ValidationReport {
  bool homogeneous = false;
  bool positive = false;
  bool convex = false;
  bool symmetric = false;
  bool uniformly_convex = false;
  // Smallest sampled tangential second derivative of phi on the circle.
  double min_tangential_hessian = 0.0;

  bool all() const { return homogeneous && positive && convex && symmetric && uniformly_convex; }
};

// Checks the structural hypotheses on `samples` random directions and pairs,
// plus an equally spaced angular sweep for the tangential Hessian. Failures
// are reported, never thrown. Throws InvalidArgument for samples < 16.
ValidationReport validate(const Anisotropy& a, std::size_t samples = 1024,
                          std::uint64_t seed = 0x5eed);

// Tangential second derivative d^2/dt^2 phi(cos t, sin t) at angle t; the
// uniform convexity indicator on the circle.
double tangential_hessian(const Anisotropy& a, double theta);

struct SmoothApproximation {
  Anisotropy anisotropy;
  // sup over the circle of |phi_eps - phi|.
  double sup_gap = 0.0;
  // sup_gap / eps.
  double constant = 0.0;
};

// Regular anisotropy uniformly close to `a`. Regular inputs come back
// unchanged (sup_gap 0). crystalline_l1 maps to smoothed_l1(eps). Kinds
// without a smoothing rule throw UnsupportedKind. eps must be in (0, 1].
SmoothApproximation smooth_approximation(const Anisotropy& a, double eps);

// sup over `angles` equally spaced unit vectors of |phi(v) - psi(v)|.
double sup_gap(const Anisotropy& phi, const Anisotropy& psi, std::size_t angles = 10000);

}  // namespace wulff
