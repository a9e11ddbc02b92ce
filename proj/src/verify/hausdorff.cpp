#include <algorithm>
#include <array>
#include <cmath>

#include "wulff_clusters/errors.hpp"
#include "wulff_clusters/verify.hpp"

namespace wulff {

namespace {

struct Curve {
  std::vector<Vec2> points;
  bool closed;
};

// Symmetric Hausdorff distance between finite unions of polylines.
double set_hausdorff(const std::vector<Curve>& a, const std::vector<Curve>& b, Vec2 shift) {
  auto one_way = [&](const std::vector<Curve>& from, const std::vector<Curve>& to, Vec2 s) {
    double worst = 0.0;
    for (const auto& c : from) {
      for (const auto& q : c.points) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& d : to) best = std::min(best, point_polyline_distance(q + s, d.points, d.closed));
        worst = std::max(worst, best);
      }
    }
    return worst;
  };
  return std::max(one_way(a, b, shift), one_way(b, a, -1.0 * shift));
}

Vec2 vertex_mean(const std::vector<Curve>& cs) {
  Vec2 sum{};
  std::size_t n = 0;
  for (const auto& c : cs) {
    for (const auto& q : c.points) sum += q;
    n += c.points.size();
  }
  return n ? sum / static_cast<double>(n) : sum;
}

double extent(const std::vector<Curve>& cs) {
  double lo_x = std::numeric_limits<double>::infinity(), hi_x = -lo_x, lo_y = lo_x, hi_y = -lo_x;
  for (const auto& c : cs)
    for (const auto& q : c.points) {
      lo_x = std::min(lo_x, q.x);
      hi_x = std::max(hi_x, q.x);
      lo_y = std::min(lo_y, q.y);
      hi_y = std::max(hi_y, q.y);
    }
  return std::max(hi_x - lo_x, hi_y - lo_y);
}

double gap(const std::vector<Curve>& a, const std::vector<Curve>& b, bool modulo_translation) {
  if (!modulo_translation) return set_hausdorff(a, b, {});

  // Nelder-Mead over the translation applied to `a`, started from the
  // difference of vertex means.
  const Vec2 start = vertex_mean(b) - vertex_mean(a);
  const double size = 0.05 * std::max(extent(a), extent(b));
  std::array<Vec2, 3> s{start, start + Vec2{size, 0.0}, start + Vec2{0.0, size}};
  std::array<double, 3> f{};
  for (int i = 0; i < 3; ++i) f[i] = set_hausdorff(a, b, s[i]);
  for (int it = 0; it < 200; ++it) {
    std::array<int, 3> order{0, 1, 2};
    std::sort(order.begin(), order.end(), [&](int i, int j) { return f[i] < f[j]; });
    const std::array<Vec2, 3> ss{s[order[0]], s[order[1]], s[order[2]]};
    const std::array<double, 3> ff{f[order[0]], f[order[1]], f[order[2]]};
    s = ss;
    f = ff;
    const double spread = std::max(norm(s[1] - s[0]), norm(s[2] - s[0]));
    if (spread <= 1e-12 * std::max(1.0, size) || f[2] - f[0] <= 1e-15) break;
    const Vec2 mid = 0.5 * (s[0] + s[1]);
    const Vec2 xr = mid + (mid - s[2]);
    const double fr = set_hausdorff(a, b, xr);
    if (fr < f[0]) {
      const Vec2 xe = mid + 2.0 * (mid - s[2]);
      const double fe = set_hausdorff(a, b, xe);
      if (fe < fr) {
        s[2] = xe;
        f[2] = fe;
      } else {
        s[2] = xr;
        f[2] = fr;
      }
    } else if (fr < f[1]) {
      s[2] = xr;
      f[2] = fr;
    } else {
      const Vec2 xc = mid + 0.5 * (s[2] - mid);
      const double fc = set_hausdorff(a, b, xc);
      if (fc < f[2]) {
        s[2] = xc;
        f[2] = fc;
      } else {
        for (int i = 1; i < 3; ++i) {
          s[i] = s[0] + 0.5 * (s[i] - s[0]);
          f[i] = set_hausdorff(a, b, s[i]);
        }
      }
    }
  }
  return std::min({f[0], f[1], f[2]});
}

}  // namespace

double hausdorff_gap(std::span<const Vec2> a, bool a_closed, std::span<const Vec2> b, bool b_closed,
                     bool modulo_translation) {
  if (a.empty() || b.empty()) throw Error(ErrorCode::InvalidArgument, "empty polyline");
  return gap({{{a.begin(), a.end()}, a_closed}}, {{{b.begin(), b.end()}, b_closed}}, modulo_translation);
}

double hausdorff_gap(const Cluster& a, const Cluster& b, bool modulo_translation) {
  bool same = a.kind == b.kind && a.chambers.size() == b.chambers.size() &&
              a.interfaces.size() == b.interfaces.size();
  for (std::size_t i = 0; same && i < a.interfaces.size(); ++i)
    same = a.interfaces[i].first == b.interfaces[i].first && a.interfaces[i].second == b.interfaces[i].second;
  if (!same) throw Error(ErrorCode::TopologyMismatch, "clusters have different topologies");
  std::vector<Curve> ca, cb;
  for (const auto& f : a.interfaces) ca.push_back({f.points, false});
  for (const auto& f : b.interfaces) cb.push_back({f.points, false});
  return gap(ca, cb, modulo_translation);
}

}  // namespace wulff
