#include "wulff_clusters/wulff.hpp"

#include <algorithm>
#include <cmath>

#include "wulff_clusters/errors.hpp"
#include "wulff_clusters/kernels.hpp"

namespace wulff {

WulffBoundary boundary_by_gradient_map(const Anisotropy& a, std::size_t n) {
  if (!a.is_regular())
    throw Error(ErrorCode::NotRegular, a.name() + " is not a regular anisotropy");
  if (n < 64) throw Error(ErrorCode::InvalidArgument, "gradient-map boundary needs n >= 64");
  WulffBoundary w;
  w.provenance = Provenance::gradient_map;
  w.vertices.reserve(n);
  w.normals.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Vec2 nu = unit_at_fraction(k, n);
    w.normals.push_back(nu);
    w.vertices.push_back(a.gradient(nu));
  }
  return w;
}

namespace {

struct LabeledVertex {
  Vec2 p;
  Vec2 edge_normal;  // outward normal of the edge leaving p
};

// Clips a convex counter-clockwise polygon by {x . y <= c}.
std::vector<LabeledVertex> clip(const std::vector<LabeledVertex>& poly, Vec2 y, double c,
                                double tol) {
  std::vector<LabeledVertex> out;
  const std::size_t n = poly.size();
  out.reserve(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    const LabeledVertex& cur = poly[i];
    const LabeledVertex& nxt = poly[(i + 1) % n];
    const double dc = c - dot(cur.p, y);
    const double dn = c - dot(nxt.p, y);
    const bool cur_in = dc >= -tol;
    const bool nxt_in = dn >= -tol;
    if (cur_in) out.push_back(cur);
    if (cur_in != nxt_in) {
      const double t = dc / (dc - dn);
      const Vec2 hit = cur.p + t * (nxt.p - cur.p);
      if (cur_in) {
        out.push_back({hit, y});
      } else {
        out.push_back({hit, cur.edge_normal});
      }
    }
  }
  return out;
}

}  // namespace

WulffBoundary boundary_by_halfplane_intersection(const Anisotropy& a, std::size_t n) {
  if (n < 4) throw Error(ErrorCode::InvalidArgument, "halfplane intersection needs n >= 4");
  std::vector<double> support(n);
  double phi_max = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    support[k] = a.eval(unit_at_fraction(k, n));
    phi_max = std::max(phi_max, support[k]);
  }
  const double box = 2.0 * phi_max;
  std::vector<LabeledVertex> poly{{{box, -box}, {1.0, 0.0}},
                                  {{box, box}, {0.0, 1.0}},
                                  {{-box, box}, {-1.0, 0.0}},
                                  {{-box, -box}, {0.0, -1.0}}};
  const double tol = 1e-14 * phi_max;
  for (std::size_t k = 0; k < n && !poly.empty(); ++k) poly = clip(poly, unit_at_fraction(k, n), support[k], tol);

  // Drop coincident vertices left by constraints that only touch a corner.
  std::vector<LabeledVertex> merged;
  const double merge_tol = 1e-12 * phi_max;
  for (const auto& v : poly) {
    if (!merged.empty() && norm(v.p - merged.back().p) <= merge_tol) {
      merged.back().edge_normal = v.edge_normal;
    } else {
      merged.push_back(v);
    }
  }
  while (merged.size() > 1 && norm(merged.front().p - merged.back().p) <= merge_tol) {
    merged.back().edge_normal = merged.front().edge_normal;
    merged.back().p = merged.front().p;
    merged.erase(merged.begin());
  }

  WulffBoundary w;
  w.provenance = Provenance::halfplane_intersection;
  for (const auto& v : merged) {
    w.vertices.push_back(v.p);
    w.normals.push_back(v.edge_normal);
  }
  if (w.vertices.size() < 3 || !(signed_area(w.vertices) > 0.0))
    throw Error(ErrorCode::DegenerateIntersection, "Wulff half-plane intersection collapsed");
  return w;
}

double area(const WulffBoundary& w) { return signed_area(w.vertices); }

std::optional<std::vector<kernels::QuadraticForm>> tangent_forms(const Anisotropy& a) {
  auto forms = a.quadratic_forms();
  if (!forms) return std::nullopt;
  // (R d)^T Q (R d) with R d = (d_y, -d_x).
  for (auto& q : *forms) q = {q.yy, -q.xy, q.xx};
  return forms;
}

double aniso_perimeter(const Anisotropy& a, std::span<const Vec2> curve, bool closed) {
  if (curve.size() < 2) throw Error(ErrorCode::InvalidArgument, "curve needs at least two vertices");
  const std::size_t segments = curve.size() - 1 + (closed ? 1 : 0);
  std::vector<double> dx(segments);
  std::vector<double> dy(segments);
  for (std::size_t i = 0; i < segments; ++i) {
    const Vec2 d = curve[(i + 1) % curve.size()] - curve[i];
    if (d.x == 0.0 && d.y == 0.0) throw Error(ErrorCode::DuplicateVertex, "repeated consecutive vertex");
    dx[i] = d.x;
    dy[i] = d.y;
  }
  if (auto forms = tangent_forms(a)) return kernels::sqrt_form_energy(dx, dy, *forms, {}, {});
  double total = 0.0;
  for (std::size_t i = 0; i < segments; ++i) total += a.eval(rotate_cw({dx[i], dy[i]}));
  return total;
}

WulffBoundary scale_to_area(const WulffBoundary& w, double m) {
  if (!(m > 0.0)) throw Error(ErrorCode::InvalidArgument, "target area must be positive");
  const double factor = std::sqrt(m / area(w));
  WulffBoundary out = w;
  for (auto& v : out.vertices) v *= factor;
  out.lambda = w.lambda * factor;
  return out;
}

double diameter(const WulffBoundary& w) { return convex_diameter(w.vertices); }

double dual_norm(const Anisotropy& a, Vec2 x, std::size_t grid) {
  if (grid < 8) grid = 8;
  auto ratio = [&](double t) {
    const Vec2 nu{std::cos(t), std::sin(t)};
    return dot(x, nu) / a.eval(nu);
  };
  std::size_t best_k = 0;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < grid; ++k) {
    const Vec2 nu = unit_at_fraction(k, grid);
    const double r = dot(x, nu) / a.eval(nu);
    if (r > best) {
      best = r;
      best_k = k;
    }
  }
  const double step = kTwoPi / static_cast<double>(grid);
  double lo = step * static_cast<double>(best_k) - step;
  double hi = lo + 2.0 * step;
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = ratio(c);
  double fd = ratio(d);
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    if (fc > fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = ratio(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = ratio(d);
    }
  }
  return std::max({best, fc, fd});
}

}  // namespace wulff
