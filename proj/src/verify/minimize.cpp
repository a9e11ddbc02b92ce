#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "wulff_clusters/errors.hpp"
#include "wulff_clusters/verify.hpp"

namespace wulff {

namespace {

double dotv(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double norm2(std::span<const double> a) { return std::sqrt(dotv(a, a)); }

struct Lagrangian {
  const DiscreteEnergyProblem& p;
  double y = 0.0;
  double rho = 1.0;
  // Weight k of the spring term k/2 sum (|e|^2 / l0 + 2 l0^2 / |e|) over arc
  // edges, smallest at the rest lengths l0.
  double spring = 0.0;
  struct Spring {
    int u, v;
    double rest;
  };
  std::vector<Spring> arc_edges;

  // Value and gradient of E + springs - y c + rho/2 c^2, c = area - m.
  double operator()(std::span<const double> x, std::span<double> g, std::vector<double>& ga, double& c) const {
    ga.resize(x.size());
    double e = p.energy(x, g);
    c = p.area(x, ga) - p.mass();
    const double w = -y + rho * c;
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += w * ga[i];
    if (spring > 0.0) {
      const std::size_t nf = p.free_vertex_count();
      for (const auto& [u, v, l0] : arc_edges) {
        const Vec2 d = p.vertex(x, v) - p.vertex(x, u);
        const double len = norm(d);
        e += 0.5 * spring * (len * len / l0 + 2.0 * l0 * l0 / len);
        const Vec2 t = 0.5 * spring * (2.0 * len / l0 - 2.0 * l0 * l0 / (len * len)) * (d / len);
        const auto iu = static_cast<std::size_t>(u), iv = static_cast<std::size_t>(v);
        if (iu < nf) {
          g[2 * iu] -= t.x;
          g[2 * iu + 1] -= t.y;
        }
        if (iv < nf) {
          g[2 * iv] += t.x;
          g[2 * iv + 1] += t.y;
        }
      }
    }
    return e - y * c + 0.5 * rho * c * c;
  }

  void hessian(std::span<const double> x, std::span<const double> ga, double c, std::vector<double>& h) const {
    const std::size_t n = x.size();
    h.assign(n * n, 0.0);
    p.add_energy_hessian(x, h);
    p.add_area_hessian(h, -y + rho * c);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) h[i * n + j] += rho * ga[i] * ga[j];
    if (spring > 0.0) {
      const std::size_t nf = p.free_vertex_count();
      for (const auto& [u, v, l0] : arc_edges) {
        const Vec2 d = p.vertex(x, v) - p.vertex(x, u);
        const double len = norm(d);
        const Vec2 q = d / len;
        const double d1 = 0.5 * spring * (2.0 * len / l0 - 2.0 * l0 * l0 / (len * len));
        const double d2 = 0.5 * spring * (2.0 / l0 + 4.0 * l0 * l0 / (len * len * len));
        const double a = d1 / len;
        const double k[2][2] = {{a + (d2 - a) * q.x * q.x, (d2 - a) * q.x * q.y},
                                {(d2 - a) * q.x * q.y, a + (d2 - a) * q.y * q.y}};
        const auto iu = static_cast<std::size_t>(u), iv = static_cast<std::size_t>(v);
        for (std::size_t r = 0; r < 2; ++r)
          for (std::size_t col = 0; col < 2; ++col) {
            if (iu < nf) h[(2 * iu + r) * n + 2 * iu + col] += k[r][col];
            if (iv < nf) h[(2 * iv + r) * n + 2 * iv + col] += k[r][col];
            if (iu < nf && iv < nf) {
              h[(2 * iu + r) * n + 2 * iv + col] -= k[r][col];
              h[(2 * iv + r) * n + 2 * iu + col] -= k[r][col];
            }
          }
      }
    }
  }
};

// Dot product of length n with independent accumulators, so it vectorises
// without reassociation flags.
double dot_n(const double* a, const double* b, std::size_t n) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    s0 += a[k] * b[k];
    s1 += a[k + 1] * b[k + 1];
    s2 += a[k + 2] * b[k + 2];
    s3 += a[k + 3] * b[k + 3];
  }
  for (; k < n; ++k) s0 += a[k] * b[k];
  return (s0 + s1) + (s2 + s3);
}

// In-place Cholesky factorisation of the dense SPD matrix a; false if a is
// not numerically positive definite.
bool cholesky(std::vector<double>& a, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    const double* rj = &a[j * n];
    double d = a[j * n + j] - dot_n(rj, rj, j);
    if (!(d > 0.0)) return false;
    d = std::sqrt(d);
    a[j * n + j] = d;
    for (std::size_t i = j + 1; i < n; ++i)
      a[i * n + j] = (a[i * n + j] - dot_n(&a[i * n], rj, j)) / d;
  }
  return true;
}

void cholesky_solve(const std::vector<double>& l, std::size_t n, std::vector<double>& b) {
  for (std::size_t i = 0; i < n; ++i) b[i] = (b[i] - dot_n(&l[i * n], b.data(), i)) / l[i * n + i];
  for (std::size_t i = n; i-- > 0;) {
    double v = b[i];
    for (std::size_t k = i + 1; k < n; ++k) v -= l[k * n + i] * b[k];
    b[i] = v / l[i * n + i];
  }
}

struct InnerResult {
  double grad_norm;
  int iterations;
};

// Largest factor in (0, 1] such that no edge changes by more than a quarter of
// its length (or a twentieth of its reference length, whichever is larger)
// and no vertex moves further than max_move.
double step_scale(const DiscreteEnergyProblem& p, std::span<const double> x, std::span<const double> s,
                  std::span<const double> edge0, double max_move) {
  const std::size_t nf = p.free_vertex_count();
  auto move = [&](int v) {
    const auto i = static_cast<std::size_t>(v);
    return i < nf ? Vec2{s[2 * i], s[2 * i + 1]} : Vec2{0.0, 0.0};
  };
  double scale = 1.0;
  for (std::size_t e = 0; e < p.edges().size(); ++e) {
    const auto [u, v] = p.edges()[e];
    const double allowed = std::max(0.25 * norm(p.vertex(x, v) - p.vertex(x, u)), 0.05 * edge0[e]);
    const double d = norm(move(v) - move(u));
    if (d > allowed) scale = std::min(scale, allowed / d);
  }
  for (std::size_t i = 0; i < nf; ++i) {
    const double d = std::hypot(s[2 * i], s[2 * i + 1]);
    if (d > max_move) scale = std::min(scale, max_move / d);
  }
  return scale;
}

// Newton's method with Levenberg-Marquardt damping. A step is accepted on
// sufficient decrease, or, once function values no longer resolve the
// decrease, when it stays within rounding of the current value and reduces
// the gradient.
InnerResult newton(const Lagrangian& f, std::vector<double>& x, double gtol, int max_iter,
                   std::span<const double> edge0, double max_move, double& mu) {
  const std::size_t n = x.size();
  std::vector<double> g(n), gn(n), ga(n), gan(n), xn(n), h, l, s(n);
  double c = 0.0, cn = 0.0;
  double fx = f(x, g, ga, c);
  double gnorm = norm2(g);
  int it = 0;
  while (it < max_iter && gnorm > gtol) {
    ++it;
    f.hessian(x, ga, c, h);
    double diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) diag = std::max(diag, std::abs(h[i * n + i]));
    const double mu_floor = 1e-14 * std::max(diag, 1.0);
    bool accepted = false;
    for (int attempt = 0; attempt < 60 && !accepted; ++attempt) {
      mu = std::max(mu, mu_floor);
      l = h;
      for (std::size_t i = 0; i < n; ++i) l[i * n + i] += mu;
      if (!cholesky(l, n)) {
        mu *= 4.0;
        continue;
      }
      for (std::size_t i = 0; i < n; ++i) s[i] = -g[i];
      cholesky_solve(l, n, s);
      const double scale = step_scale(f.p, x, s, edge0, max_move);
      if (scale < 1.0)
        for (auto& v : s) v *= scale;
      for (std::size_t i = 0; i < n; ++i) xn[i] = x[i] + s[i];
      const double fn = f(xn, gn, gan, cn);
      const double slack = 8.0 * DBL_EPSILON * std::abs(fx);
      const double gn_norm = norm2(gn);
      if (std::isfinite(fn) &&
          (fn <= fx + 1e-4 * dotv(g, s) || (fn <= fx + slack && gn_norm < gnorm))) {
        accepted = true;
        x.swap(xn);
        g.swap(gn);
        ga.swap(gan);
        c = cn;
        fx = fn;
        gnorm = gn_norm;
        mu /= 3.0;
      } else {
        mu *= 4.0;
      }
    }
    if (!accepted) break;
  }
  return {gnorm, it};
}

std::vector<double> scaled_about_centroid(const DiscreteEnergyProblem& p, std::span<const double> x,
                                          double factor) {
  std::vector<double> out(x.begin(), x.end());
  const auto& cycle = p.finite_cycle();
  Vec2 centroid{};
  for (int v : cycle) centroid += p.vertex(x, v);
  centroid = centroid / static_cast<double>(cycle.size());
  for (int v : cycle) {
    const auto i = static_cast<std::size_t>(v);
    if (i >= p.free_vertex_count()) continue;
    const Vec2 q = centroid + factor * (p.vertex(x, v) - centroid);
    out[2 * i] = q.x;
    out[2 * i + 1] = q.y;
  }
  return out;
}

}  // namespace

MinimizeResult minimize_fixed_topology(const DiscreteEnergyProblem& p, std::span<const double> init, double tol,
                                       const MinimizeOptions& options) {
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol must be positive");
  if (init.size() != p.dimension())
    throw Error(ErrorCode::DimensionMismatch, "initial point has the wrong dimension");
  const double m = p.mass();
  const double a0 = p.area(init);
  if (!(std::abs(a0 - m) <= 0.5 * m))
    throw Error(ErrorCode::InvalidArgument, "initial area is not within 50% of m");

  std::vector<double> x(init.begin(), init.end());
  const std::size_t n = x.size();
  std::vector<double> ge(n), ga(n);
  const double e0 = p.energy(x, ge);
  p.area(x, ga);

  Lagrangian f{p, 0.0, 1.0, 0.0, {}};
  f.y = dotv(ge, ga) / std::max(dotv(ga, ga), 1e-300);
  f.rho = 10.0 * e0 / (m * m);
  const double max_move = 0.05 * p.radius();
  // Rest lengths come from the standard configuration.
  const std::vector<double>& ref = p.initial();
  std::vector<double> edge0;
  for (const auto& [u, v] : p.edges()) edge0.push_back(norm(p.vertex(ref, v) - p.vertex(ref, u)));
  double arc_length = 0.0;
  for (const auto& chain : p.chains()) {
    if (chain.first != 1) continue;
    for (std::size_t k = 0; k + 1 < chain.vertices.size(); ++k) {
      const int u = chain.vertices[k], v = chain.vertices[k + 1];
      const double len = norm(p.vertex(ref, v) - p.vertex(ref, u));
      f.arc_edges.push_back({u, v, len});
      arc_length += len;
    }
  }
  // Spring energy at the reference equals options.spring * E0.
  const double spring0 = 2.0 * options.spring * e0 / (3.0 * arc_length);
  f.spring = spring0;
  double mu = 1e-3;

  MinimizeResult r;
  double prev_violation = std::abs(a0 - m);
  constexpr int kChunk = 400;
  for (int outer = 0; outer < options.max_outer; ++outer) {
    const int budget = std::min(kChunk, options.max_inner - r.iterations);
    if (budget <= 0) break;
    const InnerResult inner = newton(f, x, tol, budget, edge0, max_move, mu);
    r.iterations += inner.iterations;
    if (f.spring > 0.0) {
      // Springs keep arc vertices spread out early on and fade away.
      f.spring *= 0.1;
      if (f.spring < 1e-6 * spring0) f.spring = 0.0;
      mu = 1e-3;
    }
    const double c = p.area(x) - m;
    f.y -= f.rho * c;
    if (f.spring == 0.0 && std::abs(c) <= 1e-8 * m) {
      // Gradient of the Lagrangian at the updated multiplier.
      p.energy(x, ge);
      p.area(x, ga);
      for (std::size_t i = 0; i < n; ++i) ge[i] -= f.y * ga[i];
      if (norm2(ge) <= tol) {
        r.converged = true;
        break;
      }
    }
    if (std::abs(c) > 0.25 * prev_violation) f.rho = std::min(2.0 * f.rho, 1e14);
    prev_violation = std::abs(c);
  }

  p.energy(x, ge);
  p.area(x, ga);
  for (std::size_t i = 0; i < n; ++i) ge[i] -= f.y * ga[i];
  r.gradient_norm = norm2(ge);
  r.energy = p.energy(x);
  r.area_error = std::abs(p.area(x) - m) / m;
  r.multiplier = f.y;
  r.x = std::move(x);
  return r;
}

std::vector<double> reproject_area(const DiscreteEnergyProblem& p, std::span<const double> x) {
  const double a = p.area(x);
  if (!(a > 0.0)) throw Error(ErrorCode::InvalidArgument, "finite chamber has non-positive area");
  return scaled_about_centroid(p, x, std::sqrt(p.mass() / a));
}

std::vector<double> squashed_initialization(const DiscreteEnergyProblem& p, Vec2 axis, double factor) {
  const Vec2 u = axis / norm(axis);
  std::vector<double> x = p.initial();
  const auto& cycle = p.finite_cycle();
  Vec2 centroid{};
  for (int v : cycle) centroid += p.vertex(x, v);
  centroid = centroid / static_cast<double>(cycle.size());
  for (int v : cycle) {
    const auto i = static_cast<std::size_t>(v);
    if (i >= p.free_vertex_count()) continue;
    const Vec2 q = p.vertex(p.initial(), v) - centroid;
    const Vec2 s = centroid + q - (1.0 - factor) * dot(q, u) * u;
    x[2 * i] = s.x;
    x[2 * i + 1] = s.y;
  }
  return reproject_area(p, x);
}

std::vector<double> jittered_initialization(const DiscreteEnergyProblem& p, double sigma, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::vector<double>& base = p.initial();
  const double R = p.radius();
  const std::size_t nf = p.free_vertex_count();
  // Vertex noise is a tenth of the shortest incident edge.
  std::vector<double> local(nf, std::numeric_limits<double>::infinity());
  for (const auto& [u, v] : p.edges()) {
    const double len = norm(p.vertex(base, v) - p.vertex(base, u));
    for (int w : {u, v})
      if (static_cast<std::size_t>(w) < nf) local[static_cast<std::size_t>(w)] = std::min(local[static_cast<std::size_t>(w)], 0.1 * len);
  }

  for (int attempt = 0; attempt < 100; ++attempt) {
    // Sum of random plane waves with wavelengths between R and 2R, scaled to
    // standard deviation sigma per component.
    constexpr int kModes = 6;
    struct Mode {
      Vec2 k, amp;
      double phase;
    };
    std::vector<Mode> modes;
    for (int i = 0; i < kModes; ++i) {
      const double len = kPi / R * (1.0 + unit(rng));
      const double ang = kTwoPi * unit(rng);
      modes.push_back({len * Vec2{std::cos(ang), std::sin(ang)},
                       sigma * std::sqrt(2.0 / kModes) * Vec2{gauss(rng), gauss(rng)}, kTwoPi * unit(rng)});
    }
    std::vector<double> x = base;
    for (std::size_t i = 0; i < nf; ++i) {
      const Vec2 q{base[2 * i], base[2 * i + 1]};
      Vec2 d{};
      for (const auto& md : modes) d += std::sin(dot(md.k, q) + md.phase) * md.amp;
      d += local[i] * Vec2{gauss(rng), gauss(rng)};
      x[2 * i] += d.x;
      x[2 * i + 1] += d.y;
    }
    if (!(p.area(x) > 0.1 * p.mass())) continue;
    x = reproject_area(p, x);
    if (check_cluster(p.anisotropy(), p.to_cluster(x)).non_crossing) return x;
  }
  throw Error(ErrorCode::InvalidArgument, "jitter too large to keep an embedded cluster");
}

}  // namespace wulff
