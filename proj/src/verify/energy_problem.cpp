#include <algorithm>
#include <array>
#include <cmath>

#include "wulff_clusters/errors.hpp"
#include "wulff_clusters/verify.hpp"

namespace wulff {

DiscreteEnergyProblem DiscreteEnergyProblem::from_cluster(const Anisotropy& a, const Cluster& c,
                                                          std::size_t segment_subdivisions) {
  if (!(c.mass > 0.0) || !(c.mass < kPi * c.radius * c.radius))
    throw Error(ErrorCode::InvalidArgument, "mass must lie strictly between 0 and the disk area");
  if (segment_subdivisions == 0) segment_subdivisions = 1;

  DiscreteEnergyProblem p(a, c);
  p.kind_ = c.kind;
  p.mass_ = c.mass;
  p.radius_ = c.radius;
  p.anchors_ = c.anchors;
  p.forms_ = tangent_forms(a);

  std::vector<Vec2> free;
  for (const auto& j : c.junctions) {
    p.junctions_.push_back(static_cast<int>(free.size()));
    free.push_back(j);
  }

  // Anchor indices are resolved once the free count is known.
  constexpr int kAnchorTag = -1000000;
  auto endpoint_index = [&](Vec2 q) -> int {
    for (std::size_t i = 0; i < c.junctions.size(); ++i)
      if (c.junctions[i] == q) return static_cast<int>(i);
    for (std::size_t i = 0; i < c.anchors.size(); ++i)
      if (c.anchors[i] == q) return kAnchorTag + static_cast<int>(i);
    throw Error(ErrorCode::TopologyMismatch, "interface endpoint is neither a junction nor an anchor");
  };

  for (const auto& f : c.interfaces) {
    Chain chain{f.first, f.second, {}};
    if (f.first == 1) {
      if (f.points.size() < 8) throw Error(ErrorCode::InvalidArgument, "arcs need at least 8 vertices");
      chain.vertices.push_back(endpoint_index(f.points.front()));
      for (std::size_t i = 1; i + 1 < f.points.size(); ++i) {
        chain.vertices.push_back(static_cast<int>(free.size()));
        free.push_back(f.points[i]);
      }
      chain.vertices.push_back(endpoint_index(f.points.back()));
    } else {
      const Vec2 u = f.points.front();
      const Vec2 v = f.points.back();
      chain.vertices.push_back(endpoint_index(u));
      for (std::size_t i = 1; i < segment_subdivisions; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(segment_subdivisions);
        chain.vertices.push_back(static_cast<int>(free.size()));
        free.push_back(u + t * (v - u));
      }
      chain.vertices.push_back(endpoint_index(v));
    }
    p.chains_.push_back(std::move(chain));
  }

  p.free_count_ = free.size();
  for (auto& chain : p.chains_)
    for (auto& v : chain.vertices)
      if (v < 0) v = static_cast<int>(p.free_count_) + (v - kAnchorTag);
  for (const auto& chain : p.chains_)
    for (std::size_t i = 0; i + 1 < chain.vertices.size(); ++i)
      p.edges_.emplace_back(chain.vertices[i], chain.vertices[i + 1]);

  // Boundary cycle of E1: arcs chained end to start.
  std::vector<const Chain*> arcs;
  for (const auto& chain : p.chains_)
    if (chain.first == 1) arcs.push_back(&chain);
  if (!arcs.empty()) {
    const Chain* cur = arcs.front();
    for (std::size_t n = 0; n < arcs.size(); ++n) {
      p.cycle_.insert(p.cycle_.end(), cur->vertices.begin(), cur->vertices.end() - 1);
      const Chain* next = nullptr;
      for (const auto* f : arcs)
        if (f->vertices.front() == cur->vertices.back()) next = f;
      if (!next) throw Error(ErrorCode::TopologyMismatch, "finite chamber boundary is not closed");
      cur = next;
    }
  }

  p.initial_.resize(2 * free.size());
  for (std::size_t i = 0; i < free.size(); ++i) {
    p.initial_[2 * i] = free[i].x;
    p.initial_[2 * i + 1] = free[i].y;
  }
  return p;
}

void DiscreteEnergyProblem::check_dimension(std::span<const double> x) const {
  if (x.size() != dimension())
    throw Error(ErrorCode::DimensionMismatch, "expected " + std::to_string(dimension()) + " coordinates, got " +
                                                  std::to_string(x.size()));
}

Vec2 DiscreteEnergyProblem::vertex(std::span<const double> x, int index) const {
  const auto i = static_cast<std::size_t>(index);
  if (i < free_count_) return {x[2 * i], x[2 * i + 1]};
  return anchors_[i - free_count_];
}

double DiscreteEnergyProblem::energy(std::span<const double> x, std::span<double> gradient) const {
  check_dimension(x);
  const bool want_grad = !gradient.empty();
  if (want_grad && gradient.size() != dimension())
    throw Error(ErrorCode::DimensionMismatch, "gradient size does not match");

  const std::size_t ne = edges_.size();
  std::vector<double> dx(ne), dy(ne), gx(want_grad ? ne : 0), gy(want_grad ? ne : 0);
  for (std::size_t e = 0; e < ne; ++e) {
    const Vec2 d = vertex(x, edges_[e].second) - vertex(x, edges_[e].first);
    dx[e] = d.x;
    dy[e] = d.y;
  }

  double total = 0.0;
  if (forms_) {
    total = kernels::sqrt_form_energy(dx, dy, *forms_, gx, gy);
  } else {
    for (std::size_t e = 0; e < ne; ++e) {
      const Vec2 d{dx[e], dy[e]};
      if (d.x == 0.0 && d.y == 0.0) {
        if (want_grad) gx[e] = gy[e] = 0.0;
        continue;
      }
      total += anisotropy_.eval(rotate_cw(d));
      if (want_grad) {
        const Vec2 g = rotate_ccw(anisotropy_.gradient(rotate_cw(d)));
        gx[e] = g.x;
        gy[e] = g.y;
      }
    }
  }

  if (want_grad) {
    std::fill(gradient.begin(), gradient.end(), 0.0);
    for (std::size_t e = 0; e < ne; ++e) {
      const auto u = static_cast<std::size_t>(edges_[e].first);
      const auto v = static_cast<std::size_t>(edges_[e].second);
      if (u < free_count_) {
        gradient[2 * u] -= gx[e];
        gradient[2 * u + 1] -= gy[e];
      }
      if (v < free_count_) {
        gradient[2 * v] += gx[e];
        gradient[2 * v + 1] += gy[e];
      }
    }
  }
  return total;
}

double DiscreteEnergyProblem::area(std::span<const double> x, std::span<double> gradient) const {
  check_dimension(x);
  const std::vector<Vec2> poly = finite_boundary(x);
  if (!gradient.empty()) {
    if (gradient.size() != dimension()) throw Error(ErrorCode::DimensionMismatch, "gradient size does not match");
    std::fill(gradient.begin(), gradient.end(), 0.0);
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
      const auto v = static_cast<std::size_t>(cycle_[i]);
      if (v >= free_count_) continue;
      const Vec2 g = 0.5 * rotate_cw(poly[(i + 1) % n] - poly[(i + n - 1) % n]);
      gradient[2 * v] += g.x;
      gradient[2 * v + 1] += g.y;
    }
  }
  return signed_area(poly);
}

void DiscreteEnergyProblem::add_energy_hessian(std::span<const double> x, std::span<double> h,
                                               double scale) const {
  check_dimension(x);
  const std::size_t n = dimension();
  if (h.size() != n * n) throw Error(ErrorCode::DimensionMismatch, "Hessian size does not match");
  for (const auto& [u, v] : edges_) {
    const Vec2 d = vertex(x, v) - vertex(x, u);
    if (d.x == 0.0 && d.y == 0.0) continue;
    // Hessian of gamma = phi o R_{-90}.
    const Mat2 H = anisotropy_.hessian(rotate_cw(d));
    const std::array<double, 4> k{scale * H.yy, -scale * H.xy, -scale * H.xy, scale * H.xx};
    const std::array<std::size_t, 2> ids{static_cast<std::size_t>(u), static_cast<std::size_t>(v)};
    for (int a = 0; a < 2; ++a) {
      if (ids[a] >= free_count_) continue;
      for (int b = 0; b < 2; ++b) {
        if (ids[b] >= free_count_) continue;
        const double sign = a == b ? 1.0 : -1.0;
        for (int r = 0; r < 2; ++r)
          for (int c = 0; c < 2; ++c) h[(2 * ids[a] + r) * n + 2 * ids[b] + c] += sign * k[2 * r + c];
      }
    }
  }
}

void DiscreteEnergyProblem::add_area_hessian(std::span<double> h, double scale) const {
  const std::size_t n = dimension();
  if (h.size() != n * n) throw Error(ErrorCode::DimensionMismatch, "Hessian size does not match");
  // A = 1/2 sum cross(p_i, p_{i+1}); d2A/dp_i dp_{i+1} = 1/2 [[0, 1], [-1, 0]].
  const std::size_t m = cycle_.size();
  for (std::size_t k = 0; k < m; ++k) {
    const auto i = static_cast<std::size_t>(cycle_[k]);
    const auto j = static_cast<std::size_t>(cycle_[(k + 1) % m]);
    if (i >= free_count_ || j >= free_count_) continue;
    h[(2 * i) * n + 2 * j + 1] += 0.5 * scale;
    h[(2 * i + 1) * n + 2 * j] -= 0.5 * scale;
    h[(2 * j + 1) * n + 2 * i] += 0.5 * scale;
    h[(2 * j) * n + 2 * i + 1] -= 0.5 * scale;
  }
}

std::vector<Vec2> DiscreteEnergyProblem::finite_boundary(std::span<const double> x) const {
  check_dimension(x);
  std::vector<Vec2> out;
  out.reserve(cycle_.size());
  for (int v : cycle_) out.push_back(vertex(x, v));
  return out;
}

Cluster DiscreteEnergyProblem::to_cluster(std::span<const double> x) const {
  check_dimension(x);
  Cluster c = template_;
  for (std::size_t k = 0; k < chains_.size(); ++k) {
    auto& pts = c.interfaces[k].points;
    pts.clear();
    for (int v : chains_[k].vertices) pts.push_back(vertex(x, v));
  }
  for (std::size_t j = 0; j < junctions_.size(); ++j) c.junctions[j] = vertex(x, junctions_[j]);
  return c;
}

std::vector<double> DiscreteEnergyProblem::junction_residuals(std::span<const double> x) const {
  check_dimension(x);
  std::vector<double> out;
  for (int j : junctions_) {
    Vec2 sum{};
    for (const auto& chain : chains_) {
      std::vector<Vec2> walk;
      const auto& vs = chain.vertices;
      if (vs.front() == j) {
        for (std::size_t i = 0; i < std::min<std::size_t>(3, vs.size()); ++i) walk.push_back(vertex(x, vs[i]));
      } else if (vs.back() == j) {
        for (std::size_t i = 0; i < std::min<std::size_t>(3, vs.size()); ++i)
          walk.push_back(vertex(x, vs[vs.size() - 1 - i]));
      } else {
        continue;
      }
      // One-sided tangent from a quadratic fit in chord length.
      Vec2 tangent = walk[1] - walk[0];
      if (walk.size() == 3 && chain.first == 1) {
        const Vec2 d1 = walk[1] - walk[0];
        const Vec2 d2 = walk[2] - walk[0];
        const double s1 = norm(d1);
        const double s2 = s1 + norm(walk[2] - walk[1]);
        tangent = (s2 * s2 * d1 - s1 * s1 * d2) / (s1 * s2 * (s2 - s1));
      }
      if (norm(tangent) == 0.0) continue;
      sum += anisotropy_.gradient(rotate_cw(tangent));
    }
    out.push_back(norm(sum));
  }
  return out;
}

double DiscreteEnergyProblem::max_arc_step(std::span<const double> x) const {
  check_dimension(x);
  double h = 0.0;
  for (const auto& chain : chains_) {
    if (chain.first != 1) continue;
    for (std::size_t i = 0; i + 1 < chain.vertices.size(); ++i)
      h = std::max(h, norm(vertex(x, chain.vertices[i + 1]) - vertex(x, chain.vertices[i])));
  }
  return h;
}

double polyline_energy(const DiscreteEnergyProblem& p, std::span<const double> x) { return p.energy(x); }

}  // namespace wulff
