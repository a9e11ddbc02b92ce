#include "wulff_clusters/clusters.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wulff_clusters/errors.hpp"

namespace wulff {

const char* to_string(ClusterKind kind) { return kind == ClusterKind::lens ? "lens" : "triod"; }

namespace {

std::size_t arc_segments(double extent, std::size_t resolution) {
  const auto k = static_cast<std::size_t>(std::ceil(static_cast<double>(resolution) * extent / kTwoPi - 1e-9));
  return std::max<std::size_t>(8, k);
}

// Points grad phi(nu) + shift for normals swept counter-clockwise from
// `from` over `extent`; the endpoints are the given exact values.
std::vector<Vec2> sample_arc(const Anisotropy& a, Direction from, double extent, Vec2 first,
                             Vec2 last, Vec2 shift, std::size_t resolution) {
  const std::size_t k = arc_segments(extent, resolution);
  std::vector<Vec2> pts(k + 1);
  pts[0] = first + shift;
  for (std::size_t i = 1; i < k; ++i) {
    const double t = from.angle() + extent * static_cast<double>(i) / static_cast<double>(k);
    pts[i] = a.gradient({std::cos(t), std::sin(t)}) + shift;
  }
  pts[k] = last + shift;
  return pts;
}

void require_positive_mass(double m) {
  if (!(m > 0.0) || !std::isfinite(m)) throw Error(ErrorCode::InvalidArgument, "mass must be positive");
}

JunctionTriple negated(const JunctionTriple& t) {
  JunctionTriple r = t;
  r.n_hat = t.n_hat.opposite();
  r.nu1 = t.nu1.opposite();
  r.nu2 = t.nu2.opposite();
  r.a = -t.a;
  r.b = -t.b;
  r.c = -t.c;
  return r;
}

std::vector<Vec2> concat_boundary(std::span<const std::vector<Vec2>> arcs) {
  std::vector<Vec2> out;
  for (const auto& arc : arcs) out.insert(out.end(), arc.begin(), arc.end() - 1);
  return out;
}

void transform(std::vector<Vec2>& pts, double scale, Vec2 center) {
  for (auto& p : pts) p = scale * (p - center);
}

}  // namespace

std::vector<Vec2> LensShape::boundary() const { return concat_boundary(arcs); }
std::vector<Vec2> TriodShape::boundary() const { return concat_boundary(arcs); }

LensShape build_lens(const Anisotropy& a, Direction n_hat, double m, std::size_t resolution) {
  require_positive_mass(m);
  const JunctionTriple t = solve_young_pair(a, n_hat);
  const double extent = ccw_offset(t.nu1, t.nu2);
  if (!(extent < kPi))
    throw Error(ErrorCode::InvalidArgument, "Young pair does not bound a convex lens");

  // Unit-scale construction: arc B -> C avoiding A, then its central
  // reflection translated by B + C so it runs C -> B.
  LensShape lens;
  lens.triple = t;
  lens.arcs[0] = sample_arc(a, t.nu1, extent, t.b, t.c, {}, resolution);
  const Vec2 shift = t.b + t.c;
  lens.arcs[1].reserve(lens.arcs[0].size());
  for (const auto& p : lens.arcs[0]) lens.arcs[1].push_back(shift - p);
  lens.arcs[1].front() = lens.arcs[0].back();
  lens.arcs[1].back() = lens.arcs[0].front();

  const double unit_area = signed_area(lens.boundary());
  lens.lambda = std::sqrt(m / unit_area);
  const Vec2 center = 0.5 * shift;
  for (auto& arc : lens.arcs) transform(arc, lens.lambda, center);
  lens.vertices = {lens.arcs[0].front(), lens.arcs[0].back()};
  lens.arcs[1].front() = lens.vertices[1];
  lens.arcs[1].back() = lens.vertices[0];
  return lens;
}

TriodShape build_triod(const Anisotropy& a, Direction n_hat, double m, std::size_t resolution) {
  require_positive_mass(m);
  const auto triples = triod_normals(a, n_hat);
  const JunctionTriple& t = triples[0];
  const Vec2 A = t.a;
  const Vec2 B = t.b;
  const Vec2 C = t.c;

  // Gamma_1: A -> C' (normals n_hat .. -nu2), Gamma_3: B -> A' (nu1 .. -n_hat),
  // Gamma_2: C -> B' (nu2 .. -nu1). Translated to close up end to end with
  // vertices V1 = -C, V2 = 0, V3 = A at unit scale.
  const double ext1 = ccw_offset(t.n_hat, t.nu2.opposite());
  const double ext3 = ccw_offset(t.nu1, t.n_hat.opposite());
  const double ext2 = ccw_offset(t.nu2, t.nu1.opposite());
  if (!(ext1 < kPi && ext2 < kPi && ext3 < kPi))
    throw Error(ErrorCode::InvalidArgument, "Young triple does not bound a convex triod");

  TriodShape tri;
  tri.triples = triples;
  tri.arcs[0] = sample_arc(a, t.nu1, ext3, B, -A, A, resolution);        // V1 -> V2
  tri.arcs[1] = sample_arc(a, t.nu2, ext2, C, -B, -1.0 * C, resolution);  // V2 -> V3
  tri.arcs[2] = sample_arc(a, t.n_hat, ext1, A, -C, {}, resolution);      // V3 -> V1
  const std::array<Vec2, 3> unit_vertices{-1.0 * C, Vec2{}, A};
  for (int i = 0; i < 3; ++i) {
    tri.arcs[i].front() = unit_vertices[i];
    tri.arcs[i].back() = unit_vertices[(i + 1) % 3];
  }
  const std::array<Vec2, 3> ray_normals{t.n_hat.vec(), t.nu1.vec(), t.nu2.vec()};
  for (int i = 0; i < 3; ++i) tri.ray_directions[i] = rotate_ccw(ray_normals[i]);

  // Common point of the three ray lines {x : n_i . (x - V_i) = 0}, by least
  // squares (the lines are concurrent up to rounding).
  double sxx = 0, sxy = 0, syy = 0, bx = 0, by = 0;
  for (int i = 0; i < 3; ++i) {
    const Vec2 n = ray_normals[i];
    const double rhs = dot(n, unit_vertices[i]);
    sxx += n.x * n.x;
    sxy += n.x * n.y;
    syy += n.y * n.y;
    bx += n.x * rhs;
    by += n.y * rhs;
  }
  const double det = sxx * syy - sxy * sxy;
  const Vec2 center{(syy * bx - sxy * by) / det, (sxx * by - sxy * bx) / det};

  const double unit_area = signed_area(tri.boundary());
  tri.lambda = std::sqrt(m / unit_area);
  for (auto& arc : tri.arcs) transform(arc, tri.lambda, center);
  for (int i = 0; i < 3; ++i) tri.vertices[i] = tri.arcs[i].front();
  for (int i = 0; i < 3; ++i) tri.arcs[i].back() = tri.vertices[(i + 1) % 3];
  return tri;
}

namespace {

double wulff_diameter_at_mass(const Anisotropy& a, double m) {
  return diameter(scale_to_area(boundary_by_gradient_map(a, kDefaultResolution), m));
}

Vec2 anchor_on_circle(Vec2 from, Vec2 dir, double R) {
  const auto s = ray_circle_exit(from, dir, R);
  if (!s) throw Error(ErrorCode::RadiusTooSmall, "junction lies outside the ball");
  Vec2 p = from + *s * dir;
  // Project onto the circle to remove rounding in the radial direction.
  return (R / norm(p)) * p;
}

void require_inside(std::span<const Vec2> pts, double R) {
  for (const auto& p : pts)
    if (!(norm(p) < R)) throw Error(ErrorCode::RadiusTooSmall, "finite chamber does not fit in B_R");
}

Cluster lens_cluster(const Anisotropy& a, Direction n_hat, double m, double R, std::size_t resolution) {
  LensShape lens = build_lens(a, n_hat, m, resolution);
  require_inside(lens.boundary(), R);
  Cluster c;
  c.kind = ClusterKind::lens;
  c.n_hat = n_hat;
  c.radius = R;
  c.mass = m;
  c.lambda = lens.lambda;
  c.chambers = {{1, true}, {2, false}, {3, false}};
  const Vec2 out_left = rotate_ccw(n_hat.vec());
  c.junctions = {lens.vertices[0], lens.vertices[1]};
  c.junction_triples = {lens.triple, negated(lens.triple)};
  c.ray_directions = {out_left, -out_left};
  c.anchors = {anchor_on_circle(lens.vertices[0], out_left, R),
               anchor_on_circle(lens.vertices[1], -out_left, R)};
  c.interfaces.push_back({1, 3, lens.arcs[0]});
  c.interfaces.push_back({1, 2, lens.arcs[1]});
  c.interfaces.push_back({2, 3, {c.anchors[0], c.junctions[0]}});
  c.interfaces.push_back({2, 3, {c.junctions[1], c.anchors[1]}});
  return c;
}

Cluster triod_cluster(const Anisotropy& a, Direction n_hat, double m, double R, std::size_t resolution) {
  TriodShape tri = build_triod(a, n_hat, m, resolution);
  require_inside(tri.boundary(), R);
  Cluster c;
  c.kind = ClusterKind::triod;
  c.n_hat = n_hat;
  c.radius = R;
  c.mass = m;
  c.lambda = tri.lambda;
  c.chambers = {{1, true}, {2, false}, {3, false}, {4, false}};
  for (int i = 0; i < 3; ++i) {
    c.junctions.push_back(tri.vertices[i]);
    c.junction_triples.push_back(tri.triples[i]);
    c.ray_directions.push_back(tri.ray_directions[i]);
    c.anchors.push_back(anchor_on_circle(tri.vertices[i], tri.ray_directions[i], R));
  }
  c.interfaces.push_back({1, 2, tri.arcs[0]});
  c.interfaces.push_back({1, 3, tri.arcs[1]});
  c.interfaces.push_back({1, 4, tri.arcs[2]});
  c.interfaces.push_back({2, 4, {c.junctions[0], c.anchors[0]}});
  c.interfaces.push_back({2, 3, {c.anchors[1], c.junctions[1]}});
  c.interfaces.push_back({3, 4, {c.anchors[2], c.junctions[2]}});
  return c;
}

}  // namespace

Cluster standard_cluster_unchecked(ClusterKind kind, const Anisotropy& a, Direction n_hat, double m,
                                   double R, std::size_t resolution) {
  if (!(R > 0.0)) throw Error(ErrorCode::InvalidArgument, "radius must be positive");
  return kind == ClusterKind::lens ? lens_cluster(a, n_hat, m, R, resolution)
                                   : triod_cluster(a, n_hat, m, R, resolution);
}

Cluster standard_cluster(ClusterKind kind, const Anisotropy& a, Direction n_hat, double m, double R,
                         std::size_t resolution) {
  require_positive_mass(m);
  if (!a.is_regular())
    throw Error(ErrorCode::NotRegular, a.name() + " is not a regular anisotropy");
  const double d = wulff_diameter_at_mass(a, m);
  if (!(R > 2.0 * d))
    throw Error(ErrorCode::RadiusTooSmall,
                "R must exceed twice the Wulff diameter (" + std::to_string(2.0 * d) + ")");
  return standard_cluster_unchecked(kind, a, n_hat, m, R, resolution);
}

Cluster standard_lens_cluster(const Anisotropy& a, Direction n_hat, double m, double R,
                              std::size_t resolution) {
  return standard_cluster(ClusterKind::lens, a, n_hat, m, R, resolution);
}

Cluster standard_triod_cluster(const Anisotropy& a, Direction n_hat, double m, double R,
                               std::size_t resolution) {
  return standard_cluster(ClusterKind::triod, a, n_hat, m, R, resolution);
}

std::vector<Vec2> Cluster::finite_boundary() const {
  std::vector<const Interface*> arcs;
  for (const auto& f : interfaces)
    if (f.first == 1) arcs.push_back(&f);
  std::vector<Vec2> out;
  if (arcs.empty()) return out;
  // Chain arcs end to start.
  const Interface* cur = arcs.front();
  for (std::size_t n = 0; n < arcs.size(); ++n) {
    out.insert(out.end(), cur->points.begin(), cur->points.end() - 1);
    const Vec2 end = cur->points.back();
    const Interface* next = nullptr;
    for (const auto* f : arcs)
      if (f->points.front() == end) next = f;
    if (!next) break;
    cur = next;
  }
  return out;
}

int Cluster::chamber_at(Vec2 p) const {
  const auto e1 = finite_boundary();
  if (!e1.empty() && point_in_polygon(p, e1)) return 1;
  return infinite_chamber_at(p);
}

int Cluster::infinite_chamber_at(Vec2 p) const {
  if (kind == ClusterKind::lens) {
    // Side of the chain (far ray) -> V0 -> V1 -> (far ray).
    const double far = 10.0 * (radius + norm(p));
    const Vec2 n = n_hat.vec();
    const Vec2 left = junctions[0] + far * ray_directions[0];
    const Vec2 right = junctions[1] + far * ray_directions[1];
    const std::array<Vec2, 6> upper{left, junctions[0], junctions[1], right, right + far * n, left + far * n};
    return point_in_polygon(p, upper) ? 2 : 3;
  }
  // Triod rays lie on lines through the origin; classify by angular sector.
  const double ang = std::atan2(p.y, p.x);
  std::array<double, 3> off{};
  const double base = std::atan2(ray_directions[0].y, ray_directions[0].x);
  for (int i = 0; i < 3; ++i)
    off[i] = normalize_angle(std::atan2(ray_directions[i].y, ray_directions[i].x) - base);
  const double q = normalize_angle(ang - base);
  if (q < off[1]) return 2;
  if (q < off[2]) return 3;
  return 4;
}

double cluster_perimeter(const Anisotropy& a, const Cluster& c) {
  double total = 0.0;
  for (const auto& f : c.interfaces) total += aniso_perimeter(a, f.points);
  return total;
}

double finite_chamber_perimeter(const Anisotropy& a, const Cluster& c) {
  double total = 0.0;
  for (const auto& f : c.interfaces)
    if (f.first == 1) total += aniso_perimeter(a, f.points);
  return total;
}

PerimeterCheck cluster_perimeter_check(const Anisotropy& a, const Cluster& c) {
  PerimeterCheck out;
  out.interface_sum = cluster_perimeter(a, c);
  // P(E_i) collects phi of the normal pointing out of E_i. The union of all
  // chambers is the plane, whose perimeter vanishes.
  std::vector<double> chamber(c.chambers.size() + 1, 0.0);
  for (const auto& f : c.interfaces) {
    for (std::size_t i = 0; i + 1 < f.points.size(); ++i) {
      const Vec2 nu = rotate_cw(f.points[i + 1] - f.points[i]);
      chamber[f.first] += a.eval(nu);
      chamber[f.second] += a.eval(-nu);
    }
  }
  double sum = 0.0;
  for (double p : chamber) sum += p;
  out.chamber_half_sum = 0.5 * sum;
  out.consistent = std::abs(out.chamber_half_sum - out.interface_sum) <= 1e-9 * std::max(1.0, out.interface_sum);
  return out;
}

double cluster_perimeter_in_ball(const Anisotropy& a, const Cluster& c, Vec2 center, double r) {
  double total = 0.0;
  for (const auto& f : c.interfaces) {
    for (std::size_t i = 0; i + 1 < f.points.size(); ++i) {
      const Vec2 u = f.points[i];
      const Vec2 v = f.points[i + 1];
      const auto clip = clip_segment_to_disk(u, v, center, r);
      if (!clip) continue;
      const double frac = clip->second - clip->first;
      if (frac > 0.0) total += frac * a.eval(rotate_cw(v - u));
    }
  }
  return total;
}

ClusterReport check_cluster(const Anisotropy& a, const Cluster& c) {
  ClusterReport r;
  const double R = c.radius;

  r.junction_degrees_ok = true;
  for (const auto& j : c.junctions) {
    int degree = 0;
    for (const auto& f : c.interfaces) {
      if (norm(f.points.front() - j) <= 1e-12 * R) ++degree;
      if (norm(f.points.back() - j) <= 1e-12 * R) ++degree;
    }
    if (degree != 3) r.junction_degrees_ok = false;
  }

  struct Seg {
    Vec2 a, b;
  };
  std::vector<Seg> segs;
  for (const auto& f : c.interfaces)
    for (std::size_t i = 0; i + 1 < f.points.size(); ++i) segs.push_back({f.points[i], f.points[i + 1]});
  r.non_crossing = true;
  for (std::size_t i = 0; i < segs.size() && r.non_crossing; ++i) {
    const Seg& s = segs[i];
    const double minx = std::min(s.a.x, s.b.x), maxx = std::max(s.a.x, s.b.x);
    const double miny = std::min(s.a.y, s.b.y), maxy = std::max(s.a.y, s.b.y);
    for (std::size_t j = i + 1; j < segs.size(); ++j) {
      const Seg& t = segs[j];
      if (std::max(t.a.x, t.b.x) < minx || std::min(t.a.x, t.b.x) > maxx ||
          std::max(t.a.y, t.b.y) < miny || std::min(t.a.y, t.b.y) > maxy)
        continue;
      if (segments_cross(s.a, s.b, t.a, t.b)) {
        r.non_crossing = false;
        break;
      }
    }
  }

  const auto e1 = c.finite_boundary();
  r.area_rel_error = std::abs(signed_area(e1) - c.mass) / c.mass;
  r.finite_chamber_convex = is_convex_ccw(e1);

  for (const auto& f : c.interfaces)
    if (f.first != 1) r.max_straight_deviation = std::max(r.max_straight_deviation, max_chord_deviation(f.points) / R);
  for (const auto& p : c.anchors) r.max_anchor_error = std::max(r.max_anchor_error, std::abs(norm(p) - R) / R);
  for (const auto& t : c.junction_triples)
    r.max_young_residual = std::max(r.max_young_residual, young_residual(a, {t.n_hat, t.nu1, t.nu2}));
  return r;
}

Direction minimizing_direction(const Anisotropy& a, ClusterKind kind, double m, double R,
                               std::size_t resolution) {
  auto energy = [&](double t) {
    return cluster_perimeter(a, standard_cluster(kind, a, Direction::from_angle(t), m, R, resolution));
  };
  constexpr int kScan = 128;
  const double step = kPi / kScan;
  int best = 0;
  double best_e = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kScan; ++i) {
    const double e = energy(step * i);
    if (e < best_e) {
      best_e = e;
      best = i;
    }
  }
  double lo = step * (best - 1);
  double hi = step * (best + 1);
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - g * (hi - lo);
  double x2 = lo + g * (hi - lo);
  double f1 = energy(x1);
  double f2 = energy(x2);
  for (int it = 0; it < 60 && hi - lo > 1e-10; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = energy(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = energy(x2);
    }
  }
  const double t = f1 < f2 ? x1 : x2;
  return Direction::from_angle(std::fmod(normalize_angle(t), kPi));
}

}  // namespace wulff
