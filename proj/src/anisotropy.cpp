#include "wulff_clusters/anisotropy.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <random>

#include "wulff_clusters/errors.hpp"

namespace wulff {

namespace {

constexpr double kZeroVector = 1e-300;
constexpr double kAxisTolerance = 1e-12;

void require_nonzero(Vec2 v) {
  if (std::abs(v.x) < kZeroVector && std::abs(v.y) < kZeroVector)
    throw Error(ErrorCode::ZeroVector, "anisotropy evaluated at the origin");
}

bool near_axis(Vec2 v) {
  const double r = std::max(std::abs(v.x), std::abs(v.y));
  return std::min(std::abs(v.x), std::abs(v.y)) <= kAxisTolerance * r;
}

double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

struct SqrtFormSum {
  std::vector<kernels::QuadraticForm> forms;

  double eval(Vec2 v) const {
    double s = 0.0;
    for (const auto& q : forms) s += std::sqrt(q.xx * v.x * v.x + 2.0 * q.xy * v.x * v.y + q.yy * v.y * v.y);
    return s;
  }
  Vec2 gradient(Vec2 v) const {
    Vec2 g;
    for (const auto& q : forms) {
      const Vec2 qv{q.xx * v.x + q.xy * v.y, q.xy * v.x + q.yy * v.y};
      g += qv / std::sqrt(dot(qv, v));
    }
    return g;
  }
  Mat2 hessian(Vec2 v) const {
    Mat2 h;
    for (const auto& q : forms) {
      const Vec2 qv{q.xx * v.x + q.xy * v.y, q.xy * v.x + q.yy * v.y};
      const double val = dot(qv, v);
      const double s = std::sqrt(val);
      h.xx += (q.xx - qv.x * qv.x / val) / s;
      h.xy += (q.xy - qv.x * qv.y / val) / s;
      h.yy += (q.yy - qv.y * qv.y / val) / s;
    }
    return h;
  }
};

// Fourier profile f(theta) = c_0 + sum_k c_k cos(2 k theta) with derivatives.
double fourier_eval(const std::vector<double>& c, double theta, double* d1, double* d2) {
  double f = c.empty() ? 0.0 : c[0];
  double f1 = 0.0;
  double f2 = 0.0;
  for (std::size_t k = 1; k < c.size(); ++k) {
    const double w = 2.0 * static_cast<double>(k);
    f += c[k] * std::cos(w * theta);
    f1 -= c[k] * w * std::sin(w * theta);
    f2 -= c[k] * w * w * std::cos(w * theta);
  }
  if (d1) *d1 = f1;
  if (d2) *d2 = f2;
  return f;
}

// Minimum of f and of f + f'' over an angular sweep.
std::pair<double, double> fourier_extrema(const std::vector<double>& c, std::size_t samples) {
  double min_f = std::numeric_limits<double>::infinity();
  double min_curv = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < samples; ++i) {
    const double t = kTwoPi * static_cast<double>(i) / static_cast<double>(samples);
    double d2 = 0.0;
    const double f = fourier_eval(c, t, nullptr, &d2);
    min_f = std::min(min_f, f);
    min_curv = std::min(min_curv, f + d2);
  }
  return {min_f, min_curv};
}

}  // namespace

// ---------------------------------------------------------------- Direction

double normalize_angle(double radians) {
  double r = std::fmod(radians, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

double ccw_offset(Direction from, Direction to) { return normalize_angle(to.angle() - from.angle()); }

Direction::Direction(double radians) : angle_(normalize_angle(radians)) {
  constexpr double kQuarter = 0.5 * kPi;
  if (angle_ == 0.0) {
    unit_ = {1.0, 0.0};
  } else if (angle_ == kQuarter) {
    unit_ = {0.0, 1.0};
  } else if (angle_ == 2.0 * kQuarter) {
    unit_ = {-1.0, 0.0};
  } else if (angle_ == 3.0 * kQuarter) {
    unit_ = {0.0, -1.0};
  } else {
    unit_ = {std::cos(angle_), std::sin(angle_)};
  }
}

Direction Direction::from_degrees(double degrees) {
  const double quarters = degrees / 90.0;
  if (std::nearbyint(quarters) == quarters) {
    const double k = std::fmod(std::fmod(quarters, 4.0) + 4.0, 4.0);
    return Direction(k * 0.5 * kPi);
  }
  return Direction(degrees * kPi / 180.0);
}

Direction Direction::from_vector(Vec2 v) {
  const double len = norm(v);
  if (!(len > kZeroVector)) throw Error(ErrorCode::ZeroVector, "direction of the zero vector");
  Direction d(std::atan2(v.y, v.x));
  if (v.x != 0.0 && v.y != 0.0) d.unit_ = v / len;
  return d;
}

double Direction::degrees() const { return angle_ * 180.0 / kPi; }

// --------------------------------------------------------------- Anisotropy

const char* to_string(AnisotropyKind kind) {
  switch (kind) {
    case AnisotropyKind::euclidean: return "euclidean";
    case AnisotropyKind::elliptic: return "elliptic";
    case AnisotropyKind::p_norm: return "p_norm";
    case AnisotropyKind::crystalline_l1: return "crystalline_l1";
    case AnisotropyKind::smoothed_l1: return "smoothed_l1";
    case AnisotropyKind::custom_fourier: return "custom_fourier";
  }
  return "unknown";
}

Anisotropy::Anisotropy(AnisotropyKind kind, std::vector<double> params)
    : kind_(kind), params_(std::move(params)) {}

Anisotropy Anisotropy::euclidean() { return {AnisotropyKind::euclidean, {}}; }

Anisotropy Anisotropy::elliptic(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b))
    throw Error(ErrorCode::InvalidArgument, "elliptic axes must be positive");
  return {AnisotropyKind::elliptic, {a, b}};
}

Anisotropy Anisotropy::p_norm(double p) {
  if (!(p > 1.0) || !std::isfinite(p))
    throw Error(ErrorCode::InvalidArgument, "p_norm requires 1 < p < inf");
  return {AnisotropyKind::p_norm, {p}};
}

Anisotropy Anisotropy::crystalline_l1() { return {AnisotropyKind::crystalline_l1, {}}; }

Anisotropy Anisotropy::smoothed_l1(double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps))
    throw Error(ErrorCode::InvalidArgument, "smoothed_l1 requires eps > 0");
  return {AnisotropyKind::smoothed_l1, {eps}};
}

Anisotropy Anisotropy::custom_fourier(std::vector<double> coeffs) {
  if (coeffs.empty()) throw Error(ErrorCode::InvalidArgument, "custom_fourier needs coefficients");
  for (double c : coeffs)
    if (!std::isfinite(c)) throw Error(ErrorCode::InvalidArgument, "non-finite Fourier coefficient");
  const auto [min_f, min_curv] = fourier_extrema(coeffs, 8192);
  if (!(min_f > 0.0)) throw Error(ErrorCode::InvalidArgument, "custom_fourier profile is not positive");
  if (min_curv < -1e-12) throw Error(ErrorCode::InvalidArgument, "custom_fourier profile is not convex");
  return {AnisotropyKind::custom_fourier, std::move(coeffs)};
}

namespace {

// Shortest decimal that round-trips.
std::string shortest(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string Anisotropy::name() const {
  std::string s;
  switch (kind_) {
    case AnisotropyKind::euclidean: return "euclidean";
    case AnisotropyKind::crystalline_l1: return "l1";
    case AnisotropyKind::elliptic: return "elliptic:" + shortest(params_[0]) + "," + shortest(params_[1]);
    case AnisotropyKind::p_norm: return "pnorm:" + shortest(params_[0]);
    case AnisotropyKind::smoothed_l1: return "smoothed_l1:" + shortest(params_[0]);
    case AnisotropyKind::custom_fourier:
      s = "fourier:";
      for (std::size_t i = 0; i < params_.size(); ++i) s += (i ? "," : "") + shortest(params_[i]);
      return s;
  }
  return s;
}

std::optional<std::vector<kernels::QuadraticForm>> Anisotropy::quadratic_forms() const {
  switch (kind_) {
    case AnisotropyKind::euclidean: return std::vector<kernels::QuadraticForm>{{1.0, 0.0, 1.0}};
    case AnisotropyKind::elliptic: {
      const double a = params_[0];
      const double b = params_[1];
      return std::vector<kernels::QuadraticForm>{{a * a, 0.0, b * b}};
    }
    case AnisotropyKind::smoothed_l1: {
      const double e2 = params_[0] * params_[0];
      return std::vector<kernels::QuadraticForm>{{1.0 + e2, 0.0, e2}, {e2, 0.0, 1.0 + e2}};
    }
    default: return std::nullopt;
  }
}

double Anisotropy::fourier_profile(double theta, double* d1, double* d2) const {
  return fourier_eval(params_, theta, d1, d2);
}

double Anisotropy::eval(Vec2 v) const {
  require_nonzero(v);
  switch (kind_) {
    case AnisotropyKind::euclidean: return norm(v);
    case AnisotropyKind::crystalline_l1: return std::abs(v.x) + std::abs(v.y);
    case AnisotropyKind::elliptic:
    case AnisotropyKind::smoothed_l1: return SqrtFormSum{*quadratic_forms()}.eval(v);
    case AnisotropyKind::p_norm: {
      const double p = params_[0];
      const double s = std::max(std::abs(v.x), std::abs(v.y));
      const double ux = std::abs(v.x) / s;
      const double uy = std::abs(v.y) / s;
      return s * std::pow(std::pow(ux, p) + std::pow(uy, p), 1.0 / p);
    }
    case AnisotropyKind::custom_fourier: return norm(v) * fourier_profile(std::atan2(v.y, v.x), nullptr, nullptr);
  }
  return 0.0;
}

bool Anisotropy::is_differentiable_at(Vec2 v) const {
  if (kind_ == AnisotropyKind::crystalline_l1) return !near_axis(v);
  return true;
}

bool Anisotropy::is_regular() const {
  switch (kind_) {
    case AnisotropyKind::euclidean:
    case AnisotropyKind::elliptic:
    case AnisotropyKind::smoothed_l1: return true;
    case AnisotropyKind::p_norm: return params_[0] >= 2.0;
    case AnisotropyKind::crystalline_l1: return false;
    case AnisotropyKind::custom_fourier: return fourier_extrema(params_, 8192).second > 0.0;
  }
  return false;
}

Vec2 Anisotropy::gradient(Vec2 v) const {
  require_nonzero(v);
  switch (kind_) {
    case AnisotropyKind::euclidean: return v / norm(v);
    case AnisotropyKind::crystalline_l1:
      if (near_axis(v))
        throw Error(ErrorCode::NotDifferentiable, "l1 anisotropy is not differentiable on the axes");
      return {sign(v.x), sign(v.y)};
    case AnisotropyKind::elliptic:
    case AnisotropyKind::smoothed_l1: return SqrtFormSum{*quadratic_forms()}.gradient(v);
    case AnisotropyKind::p_norm: {
      const double p = params_[0];
      const double s = std::max(std::abs(v.x), std::abs(v.y));
      const Vec2 u = v / s;
      const double phi = std::pow(std::pow(std::abs(u.x), p) + std::pow(std::abs(u.y), p), 1.0 / p);
      const double scale = std::pow(phi, 1.0 - p);
      return {sign(u.x) * std::pow(std::abs(u.x), p - 1.0) * scale,
              sign(u.y) * std::pow(std::abs(u.y), p - 1.0) * scale};
    }
    case AnisotropyKind::custom_fourier: {
      const double t = std::atan2(v.y, v.x);
      double d1 = 0.0;
      const double f = fourier_profile(t, &d1, nullptr);
      const Vec2 er{std::cos(t), std::sin(t)};
      return f * er + d1 * rotate_ccw(er);
    }
  }
  return {};
}

Mat2 Anisotropy::hessian(Vec2 v) const {
  require_nonzero(v);
  switch (kind_) {
    case AnisotropyKind::euclidean: {
      const double r = norm(v);
      const Vec2 u = v / r;
      return {(1.0 - u.x * u.x) / r, -u.x * u.y / r, (1.0 - u.y * u.y) / r};
    }
    case AnisotropyKind::crystalline_l1:
      if (near_axis(v))
        throw Error(ErrorCode::NotDifferentiable, "l1 anisotropy is not differentiable on the axes");
      return {};
    case AnisotropyKind::elliptic:
    case AnisotropyKind::smoothed_l1: return SqrtFormSum{*quadratic_forms()}.hessian(v);
    case AnisotropyKind::p_norm: {
      const double p = params_[0];
      if (p < 2.0 && near_axis(v))
        throw Error(ErrorCode::NotDifferentiable, "p_norm with p < 2 has no Hessian on the axes");
      const double s = std::max(std::abs(v.x), std::abs(v.y));
      const Vec2 u = v / s;
      const double ax = std::abs(u.x);
      const double ay = std::abs(u.y);
      const double phi = std::pow(std::pow(ax, p) + std::pow(ay, p), 1.0 / p);
      const double c = (p - 1.0) * std::pow(phi, 1.0 - p);
      const double gx = sign(u.x) * std::pow(ax, p - 1.0);
      const double gy = sign(u.y) * std::pow(ay, p - 1.0);
      const double phi_p = std::pow(phi, p);
      // Degree -1 homogeneity: H(v) = H(u) / s.
      return {c * (std::pow(ax, p - 2.0) - gx * gx / phi_p) / s, c * (-gx * gy / phi_p) / s,
              c * (std::pow(ay, p - 2.0) - gy * gy / phi_p) / s};
    }
    case AnisotropyKind::custom_fourier: {
      const double h = 1e-5 * norm(v);
      const Vec2 gxp = gradient({v.x + h, v.y});
      const Vec2 gxm = gradient({v.x - h, v.y});
      const Vec2 gyp = gradient({v.x, v.y + h});
      const Vec2 gym = gradient({v.x, v.y - h});
      const double hxx = (gxp.x - gxm.x) / (2.0 * h);
      const double hyy = (gyp.y - gym.y) / (2.0 * h);
      const double hxy = 0.5 * ((gxp.y - gxm.y) + (gyp.x - gym.x)) / (2.0 * h);
      return {hxx, hxy, hyy};
    }
  }
  return {};
}

double Anisotropy::max_on_circle(std::size_t samples) const {
  double best = 0.0;
  for (std::size_t i = 0; i < samples; ++i) best = std::max(best, eval(unit_at_fraction(i, samples)));
  return best;
}

double Anisotropy::min_on_circle(std::size_t samples) const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < samples; ++i) best = std::min(best, eval(unit_at_fraction(i, samples)));
  return best;
}

// --------------------------------------------------------------- validation

double tangential_hessian(const Anisotropy& a, double theta) {
  const Vec2 u{std::cos(theta), std::sin(theta)};
  const Vec2 t = rotate_ccw(u);
  try {
    return dot(t, a.hessian(u) * t);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NotDifferentiable) return 0.0;
    throw;
  }
}

ValidationReport validate(const Anisotropy& a, std::size_t samples, std::uint64_t seed) {
  if (samples < 16) throw Error(ErrorCode::InvalidArgument, "validate needs at least 16 samples");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  std::uniform_real_distribution<double> log_radius(std::log(1e-2), std::log(1e2));
  std::uniform_real_distribution<double> scale(1e-3, 1e3);
  auto random_vector = [&] {
    const double t = angle(rng);
    const double r = std::exp(log_radius(rng));
    return Vec2{r * std::cos(t), r * std::sin(t)};
  };

  ValidationReport report;
  report.homogeneous = report.positive = report.convex = report.symmetric = true;
  for (std::size_t i = 0; i < samples; ++i) {
    const Vec2 u = random_vector();
    const Vec2 v = random_vector();
    const double t = scale(rng);
    const double pu = a.eval(u);
    const double pv = a.eval(v);
    if (!(pu > 0.0) || !(pv > 0.0)) report.positive = false;
    if (std::abs(a.eval(t * u) - t * pu) > 1e-9 * t * pu) report.homogeneous = false;
    if (std::abs(a.eval(-u) - pu) > 1e-12 * pu) report.symmetric = false;
    const Vec2 mid = 0.5 * (u + v);
    if (norm(mid) > 1e-300 && a.eval(mid) > 0.5 * (pu + pv) + 1e-12 * (pu + pv)) report.convex = false;
  }

  const std::size_t sweep = std::max<std::size_t>(samples, 4096);
  double min_h = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < sweep; ++i)
    min_h = std::min(min_h, tangential_hessian(a, kTwoPi * static_cast<double>(i) / static_cast<double>(sweep)));
  for (std::size_t i = 0; i < samples; ++i) min_h = std::min(min_h, tangential_hessian(a, angle(rng)));
  report.min_tangential_hessian = min_h;
  report.uniformly_convex = min_h > 1e-9 * a.max_on_circle(256);
  return report;
}

SmoothApproximation smooth_approximation(const Anisotropy& a, double eps) {
  if (!(eps > 0.0) || eps > 1.0)
    throw Error(ErrorCode::InvalidArgument, "smoothing parameter must lie in (0, 1]");
  if (a.is_regular()) return {a, 0.0, 0.0};
  if (a.kind() == AnisotropyKind::crystalline_l1) {
    Anisotropy smooth = Anisotropy::smoothed_l1(eps);
    const double gap = sup_gap(smooth, a);
    return {smooth, gap, gap / eps};
  }
  throw Error(ErrorCode::UnsupportedKind,
              std::string("no smoothing rule for ") + to_string(a.kind()));
}

double sup_gap(const Anisotropy& phi, const Anisotropy& psi, std::size_t angles) {
  double gap = 0.0;
  for (std::size_t i = 0; i < angles; ++i) {
    const Vec2 u = unit_at_fraction(i, angles);
    gap = std::max(gap, std::abs(phi.eval(u) - psi.eval(u)));
  }
  return gap;
}

}  // namespace wulff
