#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>

#include "wulff_clusters/errors.hpp"
#include "wulff_clusters/verify.hpp"
#include "max_flow.hpp"

namespace wulff {

double Stencil::density(Vec2 nu) const {
  double s = 0.0;
  for (std::size_t k = 0; k < offsets.size(); ++k)
    s += weights[k] * std::abs(offsets[k].first * nu.x + offsets[k].second * nu.y);
  return s;
}

Stencil fit_stencil(const Anisotropy& a) {
  Stencil st;
  st.offsets = {{1, 0}, {0, 1}, {1, 1}, {1, -1}, {2, 1}, {1, 2}, {2, -1}, {1, -2}};
  const std::size_t K = st.offsets.size();
  constexpr std::size_t kAngles = 360;

  // Least squares with w >= 0 by projected coordinate descent on the normal
  // equations.
  std::vector<std::vector<double>> basis(K, std::vector<double>(kAngles));
  std::vector<double> target(kAngles);
  for (std::size_t j = 0; j < kAngles; ++j) {
    const Vec2 nu = unit_at_fraction(j, 2 * kAngles);  // half circle suffices
    target[j] = a.eval(nu);
    for (std::size_t k = 0; k < K; ++k)
      basis[k][j] = std::abs(st.offsets[k].first * nu.x + st.offsets[k].second * nu.y);
  }
  std::vector<std::vector<double>> gram(K, std::vector<double>(K));
  std::vector<double> rhs(K);
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t l = 0; l < K; ++l)
      gram[k][l] = std::inner_product(basis[k].begin(), basis[k].end(), basis[l].begin(), 0.0);
    rhs[k] = std::inner_product(basis[k].begin(), basis[k].end(), target.begin(), 0.0);
  }
  st.weights.assign(K, 0.0);
  for (int sweep = 0; sweep < 5000; ++sweep) {
    double change = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      double r = rhs[k];
      for (std::size_t l = 0; l < K; ++l)
        if (l != k) r -= gram[k][l] * st.weights[l];
      const double w = std::max(0.0, r / gram[k][k]);
      change = std::max(change, std::abs(w - st.weights[k]));
      st.weights[k] = w;
    }
    if (change < 1e-14) break;
  }
  return st;
}

namespace {

Cluster exterior_configuration(const Anisotropy& a, ClusterKind kind, double m, double R, Direction n_hat) {
  if (m > 0.0) return standard_cluster_unchecked(kind, a, n_hat, m, R);
  Cluster c;
  c.kind = kind;
  c.n_hat = n_hat;
  c.radius = R;
  if (kind == ClusterKind::lens) {
    const Vec2 left = rotate_ccw(n_hat.vec());
    c.chambers = {{2, false}, {3, false}};
    c.junctions = {Vec2{}, Vec2{}};
    c.ray_directions = {left, -left};
  } else {
    const JunctionTriple t = solve_young_pair(a, n_hat);
    c.chambers = {{2, false}, {3, false}, {4, false}};
    c.junctions = {Vec2{}, Vec2{}, Vec2{}};
    c.ray_directions = {rotate_ccw(t.n_hat.vec()), rotate_ccw(t.nu1.vec()), rotate_ccw(t.nu2.vec())};
  }
  return c;
}

struct Nbr {
  int dx, dy;
  double w;
};

// Stencil offsets with both signs and their edge weights w_k h.
std::vector<Nbr> stencil_neighbours(const Stencil& st, double cell) {
  std::vector<Nbr> out;
  for (std::size_t k = 0; k < st.offsets.size(); ++k) {
    const auto [dx, dy] = st.offsets[k];
    if (st.weights[k] <= 0.0) continue;
    out.push_back({dx, dy, st.weights[k] * cell});
    out.push_back({-dx, -dy, st.weights[k] * cell});
  }
  return out;
}

double lattice_energy(const GridPartition& g, const std::vector<Nbr>& nbr) {
  const int W = g.width;
  double e = 0.0;
  for (int j = 0; j < W; ++j)
    for (int i = 0; i < W; ++i)
      for (const auto& n : nbr) {
        const int ii = i + n.dx, jj = j + n.dy;
        if (ii < 0 || jj < 0 || ii >= W || jj >= W) continue;
        if (g.at(i, j) != g.at(ii, jj)) e += 0.5 * n.w;
      }
  return e;
}

class Annealer {
 public:
  Annealer(GridPartition& g, const std::vector<Nbr>& nbr, std::uint64_t seed) : g_(g), rng_(seed), nbr_(nbr) {
    const int W = g_.width;
    pos_.assign(static_cast<std::size_t>(W) * W, -1);
    for (std::size_t c = 0; c < g_.labels.size(); ++c) {
      if (g_.labels[c] == 1) {
        pos_[c] = static_cast<int>(e1_.size());
        e1_.push_back(static_cast<int>(c));
      }
      if (!g_.frozen[c]) free_.push_back(static_cast<int>(c));
    }
  }

  void anneal(double t0, double cooling, int sweeps) {
    double T = t0;
    for (int s = 0; s < sweeps; ++s, T *= cooling) {
      refresh_fronts();
      const std::size_t moves = 2 * (interface_.size() + inner_.size());
      for (std::size_t k = 0; k < moves; ++k) propose(T, false);
    }
  }

  // Zero-temperature descent until a full pass changes nothing.
  void descend() {
    for (int pass = 0; pass < 100; ++pass) {
      bool changed = false;
      for (int c : free_) {
        const std::uint8_t old = g_.labels[c];
        if (old == 1) continue;
        double best = 0.0;
        std::uint8_t best_label = old;
        for (std::uint8_t l : neighbour_labels(c)) {
          if (l == 1 || l == old) continue;
          const double d = delta(c, l);
          if (d < best - 1e-12) {
            best = d;
            best_label = l;
          }
        }
        if (best_label != old) {
          g_.labels[c] = best_label;
          changed = true;
        }
      }
      refresh_fronts();
      for (std::size_t k = 0; k < 20 * e1_.size(); ++k) changed |= propose(0.0, true);
      if (!changed) break;
    }
  }

 private:
  std::size_t idx(int i, int j) const { return static_cast<std::size_t>(j) * g_.width + i; }

  double delta(int c, std::uint8_t to) const {
    const int W = g_.width;
    const int i = c % W, j = c / W;
    const std::uint8_t from = g_.labels[c];
    double d = 0.0;
    for (const auto& n : nbr_) {
      const int ii = i + n.dx, jj = j + n.dy;
      if (ii < 0 || jj < 0 || ii >= W || jj >= W) continue;
      const std::uint8_t l = g_.labels[idx(ii, jj)];
      d += n.w * (static_cast<int>(to != l) - static_cast<int>(from != l));
    }
    return d;
  }

  std::vector<std::uint8_t> neighbour_labels(int c) const {
    const int W = g_.width;
    const int i = c % W, j = c / W;
    std::vector<std::uint8_t> out;
    for (const auto& n : nbr_) {
      const int ii = i + n.dx, jj = j + n.dy;
      if (ii < 0 || jj < 0 || ii >= W || jj >= W) continue;
      const std::uint8_t l = g_.labels[idx(ii, jj)];
      if (std::find(out.begin(), out.end(), l) == out.end()) out.push_back(l);
    }
    return out;
  }

  int random_neighbour(int c) {
    const int W = g_.width;
    const auto& n = nbr_[pick(nbr_.size())];
    const int ii = c % W + n.dx, jj = c / W + n.dy;
    if (ii < 0 || jj < 0 || ii >= W || jj >= W) return -1;
    return static_cast<int>(idx(ii, jj));
  }

  // E1 cells with a neighbour outside E1, free cells outside E1 next to it,
  // and free cells outside E1 next to another infinite label.
  void refresh_fronts() {
    const int W = g_.width;
    inner_.clear();
    outer_.clear();
    interface_.clear();
    for (int c : free_) {
      const std::uint8_t l = g_.labels[c];
      if (l == 1) continue;
      for (const auto& n : nbr_) {
        const int ii = c % W + n.dx, jj = c / W + n.dy;
        if (ii < 0 || jj < 0 || ii >= W || jj >= W) continue;
        const std::uint8_t m = g_.labels[idx(ii, jj)];
        if (m != l && m != 1) {
          interface_.push_back(c);
          break;
        }
      }
    }
    for (int c : e1_) {
      bool boundary = false;
      for (const auto& n : nbr_) {
        const int ii = c % W + n.dx, jj = c / W + n.dy;
        if (ii < 0 || jj < 0 || ii >= W || jj >= W) continue;
        const int d = static_cast<int>(idx(ii, jj));
        if (g_.labels[d] == 1) continue;
        boundary = true;
        if (!g_.frozen[d]) outer_.push_back(d);
      }
      if (boundary) inner_.push_back(c);
    }
    std::sort(outer_.begin(), outer_.end());
    outer_.erase(std::unique(outer_.begin(), outer_.end()), outer_.end());
  }

  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

  bool accept(double d, double T) {
    if (d <= 0.0) return T > 0.0 || d < -1e-12;
    if (T <= 0.0) return false;
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < std::exp(-d / T);
  }

  void set_label(int c, std::uint8_t l) {
    const std::uint8_t old = g_.labels[c];
    g_.labels[c] = l;
    if (old == 1 && l != 1) {
      const int p = pos_[c];
      const int last = e1_.back();
      e1_[p] = last;
      pos_[last] = p;
      e1_.pop_back();
      pos_[c] = -1;
    } else if (old != 1 && l == 1) {
      pos_[c] = static_cast<int>(e1_.size());
      e1_.push_back(c);
    }
  }

  bool propose(double T, bool exchange_only) {
    const bool exchange = exchange_only || (std::uniform_int_distribution<int>(0, 1)(rng_) == 1);
    if (!exchange) {
      if (interface_.empty()) return false;
      const int c = interface_[pick(interface_.size())];
      const std::uint8_t old = g_.labels[c];
      if (old == 1) return false;
      const int n = random_neighbour(c);
      if (n < 0) return false;
      const std::uint8_t l = g_.labels[n];
      if (l == 1 || l == old) return false;
      const double d = delta(c, l);
      if (!accept(d, T)) return false;
      g_.labels[c] = l;
      return true;
    }
    if (inner_.empty() || outer_.empty()) return false;
    // Move one E1 boundary cell out and one cell of the outer front in.
    const int c1 = inner_[pick(inner_.size())];
    if (g_.labels[c1] != 1) return false;
    const int n1 = random_neighbour(c1);
    if (n1 < 0 || g_.labels[n1] == 1) return false;
    const std::uint8_t out_label = g_.labels[n1];
    const int c2 = outer_[pick(outer_.size())];
    if (c2 == c1 || g_.labels[c2] == 1) return false;
    const std::uint8_t c2_label = g_.labels[c2];
    const double d1 = delta(c1, out_label);
    set_label(c1, out_label);
    const double d2 = delta(c2, 1);
    set_label(c2, 1);
    if (accept(d1 + d2, T)) return true;
    set_label(c2, c2_label);
    set_label(c1, 1);
    return false;
  }

  GridPartition& g_;
  std::mt19937_64 rng_;
  const std::vector<Nbr>& nbr_;
  std::vector<int> e1_;
  std::vector<int> pos_;
  std::vector<int> free_;
  std::vector<int> inner_;
  std::vector<int> outer_;
  std::vector<int> interface_;
};

// Free cells within Chebyshev distance `radius` of a seed cell.
std::vector<int> band(const GridPartition& g, const std::vector<std::uint8_t>& seed, int radius) {
  const int W = g.width;
  std::vector<int> dist(g.labels.size(), -1);
  std::vector<int> frontier;
  for (std::size_t c = 0; c < seed.size(); ++c)
    if (seed[c]) {
      dist[c] = 0;
      frontier.push_back(static_cast<int>(c));
    }
  std::vector<int> out;
  for (int d = 0; d <= radius && !frontier.empty(); ++d) {
    std::vector<int> next;
    for (int c : frontier) {
      if (!g.frozen[static_cast<std::size_t>(c)]) out.push_back(c);
      if (d == radius) continue;
      const int i = c % W, j = c / W;
      for (int dj = -1; dj <= 1; ++dj)
        for (int di = -1; di <= 1; ++di) {
          const int ii = i + di, jj = j + dj;
          if (ii < 0 || jj < 0 || ii >= W || jj >= W) continue;
          const std::size_t n = static_cast<std::size_t>(jj) * W + ii;
          if (dist[n] >= 0) continue;
          dist[n] = d + 1;
          next.push_back(static_cast<int>(n));
        }
    }
    frontier = std::move(next);
  }
  return out;
}

// Cells with a stencil neighbour of a different label, restricted by `keep`.
template <class Keep>
std::vector<std::uint8_t> interface_cells(const GridPartition& g, const std::vector<Nbr>& nbr, Keep keep) {
  const int W = g.width;
  std::vector<std::uint8_t> out(g.labels.size(), 0);
  for (int j = 0; j < W; ++j)
    for (int i = 0; i < W; ++i) {
      if (!keep(g.at(i, j))) continue;
      for (const auto& n : nbr) {
        const int ii = i + n.dx, jj = j + n.dy;
        if (ii < 0 || jj < 0 || ii >= W || jj >= W) continue;
        if (g.at(ii, jj) != g.at(i, j)) {
          out[static_cast<std::size_t>(j) * W + i] = 1;
          break;
        }
      }
    }
  return out;
}

// Exact minimiser, by minimum cut, of the lattice energy over labellings in
// which each active cell c takes either zero[c] (x = 0) or one[c] (x = 1),
// plus bonus[c] * x_c; all other cells keep their labels. Needs the pairwise
// terms to be submodular, which holds for expansion moves of the Potts cut.
std::vector<std::uint8_t> binary_move(const GridPartition& g, const std::vector<Nbr>& nbr,
                                      const std::vector<int>& active, const std::vector<std::uint8_t>& zero,
                                      const std::vector<std::uint8_t>& one, const std::vector<double>& bonus) {
  const int W = g.width;
  std::vector<int> id(g.labels.size(), -1);
  for (std::size_t k = 0; k < active.size(); ++k) id[static_cast<std::size_t>(active[k])] = static_cast<int>(k);
  MaxFlow flow(static_cast<int>(active.size()));
  std::vector<double> unary(active.size(), 0.0);  // cost of x = 1 minus cost of x = 0
  for (std::size_t k = 0; k < active.size(); ++k) {
    const int c = active[k];
    const int i = c % W, j = c / W;
    unary[k] += bonus[k];
    for (const auto& n : nbr) {
      const int ii = i + n.dx, jj = j + n.dy;
      if (ii < 0 || jj < 0 || ii >= W || jj >= W) continue;
      const std::size_t d = static_cast<std::size_t>(jj) * W + ii;
      const int kd = id[d];
      if (kd < 0) {
        const std::uint8_t l = g.labels[d];
        unary[k] += n.w * (static_cast<int>(one[k] != l) - static_cast<int>(zero[k] != l));
        continue;
      }
      if (kd < static_cast<int>(k)) continue;
      const auto q = static_cast<std::size_t>(kd);
      const double A = n.w * (zero[k] != zero[q]), B = n.w * (zero[k] != one[q]);
      const double C = n.w * (one[k] != zero[q]), D = n.w * (one[k] != one[q]);
      unary[k] += C - A;
      unary[q] += D - C;
      flow.add_edge(static_cast<int>(k), kd, std::max(0.0, B + C - A - D));
    }
  }
  for (std::size_t k = 0; k < active.size(); ++k) {
    if (unary[k] > 0.0) flow.add_terminal(static_cast<int>(k), unary[k], 0.0);
    else flow.add_terminal(static_cast<int>(k), 0.0, -unary[k]);
  }
  flow.solve();
  std::vector<std::uint8_t> x(active.size());
  for (std::size_t k = 0; k < active.size(); ++k) x[k] = flow.sink_side(static_cast<int>(k)) ? 1 : 0;
  return x;
}

// Change of lattice energy if cell c takes label l.
double relabel_delta(const GridPartition& g, const std::vector<Nbr>& nbr, int c, std::uint8_t l) {
  const int W = g.width;
  const int i = c % W, j = c / W;
  const std::uint8_t from = g.labels[static_cast<std::size_t>(c)];
  double d = 0.0;
  for (const auto& n : nbr) {
    const int ii = i + n.dx, jj = j + n.dy;
    if (ii < 0 || jj < 0 || ii >= W || jj >= W) continue;
    const std::uint8_t m = g.at(ii, jj);
    d += n.w * (static_cast<int>(l != m) - static_cast<int>(from != m));
  }
  return d;
}

constexpr int kBand = 6;

// Alpha-expansion of the infinite label `alpha` over cells outside E1.
void expand(GridPartition& g, const std::vector<Nbr>& nbr, std::uint8_t alpha) {
  const auto seed = interface_cells(g, nbr, [&](std::uint8_t l) { return l == alpha; });
  std::vector<int> active;
  for (int c : band(g, seed, kBand)) {
    const std::uint8_t l = g.labels[static_cast<std::size_t>(c)];
    if (l != 1 && l != alpha) active.push_back(c);
  }
  if (active.empty()) return;
  std::vector<std::uint8_t> zero(active.size()), one(active.size(), alpha);
  for (std::size_t k = 0; k < active.size(); ++k) zero[k] = g.labels[static_cast<std::size_t>(active[k])];
  const auto x = binary_move(g, nbr, active, zero, one, std::vector<double>(active.size(), 0.0));
  for (std::size_t k = 0; k < active.size(); ++k)
    if (x[k]) g.labels[static_cast<std::size_t>(active[k])] = alpha;
}

// Re-solves the E1 membership of cells near its boundary by minimum cut, the
// area multiplier chosen by bisection so that at least target cells are in
// E1, then trims the excess greedily. Cells leaving E1 take `background`.
void reshape_finite(GridPartition& g, const std::vector<Nbr>& nbr, const std::vector<std::uint8_t>& background) {
  const auto seed = interface_cells(g, nbr, [](std::uint8_t l) { return l == 1; });
  const std::vector<int> active = band(g, seed, kBand);
  if (active.empty()) return;
  std::size_t fixed = 0;
  {
    std::vector<std::uint8_t> in_band(g.labels.size(), 0);
    for (int c : active) in_band[static_cast<std::size_t>(c)] = 1;
    for (std::size_t c = 0; c < g.labels.size(); ++c) fixed += g.labels[c] == 1 && !in_band[c];
  }
  std::vector<std::uint8_t> zero(active.size()), one(active.size(), 1);
  for (std::size_t k = 0; k < active.size(); ++k) {
    const auto c = static_cast<std::size_t>(active[k]);
    zero[k] = g.labels[c] == 1 ? background[c] : g.labels[c];
  }
  auto solve = [&](double lambda, std::size_t& count) {
    auto x = binary_move(g, nbr, active, zero, one, std::vector<double>(active.size(), -lambda));
    count = fixed + static_cast<std::size_t>(std::count(x.begin(), x.end(), 1));
    return x;
  };
  double lo = 0.0, hi = nbr.empty() ? 1.0 : nbr.front().w;
  std::size_t count = 0;
  auto x = solve(hi, count);
  for (int k = 0; k < 60 && count < g.target_count; ++k) x = solve(hi *= 2.0, count);
  if (count < g.target_count) return;
  for (int k = 0; k < 40; ++k) {
    const double mid = 0.5 * (lo + hi);
    std::size_t cm = 0;
    auto xm = solve(mid, cm);
    if (cm >= g.target_count) {
      hi = mid;
      x = std::move(xm);
      count = cm;
    } else {
      lo = mid;
    }
  }
  for (std::size_t k = 0; k < active.size(); ++k) g.labels[static_cast<std::size_t>(active[k])] = x[k] ? 1 : zero[k];

  // Remove the cheapest boundary cells of E1 until the count is exact.
  for (; count > g.target_count; --count) {
    const auto bd = interface_cells(g, nbr, [](std::uint8_t l) { return l == 1; });
    int best = -1;
    double best_delta = 0.0;
    for (std::size_t c = 0; c < bd.size(); ++c) {
      if (!bd[c] || g.frozen[c]) continue;
      const double d = relabel_delta(g, nbr, static_cast<int>(c), background[c]);
      if (best < 0 || d < best_delta) {
        best = static_cast<int>(c);
        best_delta = d;
      }
    }
    if (best < 0) break;
    g.labels[static_cast<std::size_t>(best)] = background[static_cast<std::size_t>(best)];
  }
}

// Alternates expansion moves of the infinite labels with E1 reshaping while
// the energy decreases; a step that raises it is undone.
double polish_local(GridPartition& g, const std::vector<Nbr>& nbr, const std::vector<std::uint8_t>& infinite,
                    const std::vector<std::uint8_t>& background) {
  double e = lattice_energy(g, nbr);
  for (int round = 0; round < 20; ++round) {
    const double start = e;
    for (std::uint8_t alpha : infinite) {
      expand(g, nbr, alpha);
      e = std::min(e, lattice_energy(g, nbr));
    }
    const std::vector<std::uint8_t> before = g.labels;
    reshape_finite(g, nbr, background);
    const double after = lattice_energy(g, nbr);
    const bool count_ok = static_cast<std::size_t>(std::count(g.labels.begin(), g.labels.end(), 1)) == g.target_count;
    if (after < e - 1e-12 && count_ok) e = after;
    else g.labels = before;
    if (e > start - 1e-12) break;
  }
  return e;
}

// Moves E1 by (dx, dy) cells; vacated cells take `background`. False when E1
// would cover a frozen cell.
bool shift_finite(GridPartition& g, const std::vector<std::uint8_t>& background, int dx, int dy) {
  const int W = g.width;
  std::vector<std::uint8_t> next = g.labels;
  for (std::size_t c = 0; c < next.size(); ++c)
    if (next[c] == 1) next[c] = background[c];
  for (int j = 0; j < W; ++j)
    for (int i = 0; i < W; ++i) {
      if (g.at(i, j) != 1) continue;
      const int ii = i + dx, jj = j + dy;
      if (ii < 0 || jj < 0 || ii >= W || jj >= W) return false;
      const std::size_t d = static_cast<std::size_t>(jj) * W + ii;
      if (g.frozen[d]) return false;
      next[d] = 1;
    }
  g.labels = std::move(next);
  return true;
}

// One-cell translations of E1, each re-polished, while any of them lowers
// the energy.
void translate_finite(GridPartition& g, const std::vector<Nbr>& nbr, const std::vector<std::uint8_t>& infinite,
                      const std::vector<std::uint8_t>& background) {
  if (g.target_count == 0) return;
  double e = lattice_energy(g, nbr);
  constexpr int kShifts[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  for (bool improved = true; improved;) {
    improved = false;
    for (const auto& d : kShifts) {
      const std::vector<std::uint8_t> before = g.labels;
      if (shift_finite(g, background, d[0], d[1])) {
        const double after = polish_local(g, nbr, infinite, background);
        if (after < e - 1e-12) {
          e = after;
          improved = true;
          continue;
        }
      }
      g.labels = before;
    }
  }
}

struct Components {
  std::size_t count = 0;
  std::size_t touching = 0;
};

// 4-connected components of `label` and how many of them reach a frozen cell.
Components components(const GridPartition& g, std::uint8_t label) {
  const int W = g.width;
  std::vector<std::uint8_t> seen(g.labels.size(), 0);
  std::vector<int> stack;
  Components out;
  for (std::size_t s = 0; s < g.labels.size(); ++s) {
    if (g.labels[s] != label || seen[s]) continue;
    ++out.count;
    bool touches = false;
    stack.push_back(static_cast<int>(s));
    seen[s] = 1;
    while (!stack.empty()) {
      const int c = stack.back();
      stack.pop_back();
      touches |= g.frozen[c] != 0;
      const int i = c % W, j = c / W;
      const std::array<std::pair<int, int>, 4> nb{{{i + 1, j}, {i - 1, j}, {i, j + 1}, {i, j - 1}}};
      for (const auto& [ii, jj] : nb) {
        if (ii < 0 || jj < 0 || ii >= W || jj >= W) continue;
        const std::size_t n = static_cast<std::size_t>(jj) * W + ii;
        if (g.labels[n] == label && !seen[n]) {
          seen[n] = 1;
          stack.push_back(static_cast<int>(n));
        }
      }
    }
    if (touches) ++out.touching;
  }
  return out;
}

// |G delta M| in cells, minimised over integer shifts of G near the centroid
// alignment.
std::size_t symmetric_difference_cells(const std::vector<std::uint8_t>& G, const std::vector<std::uint8_t>& M,
                                       int W) {
  auto centroid = [&](const std::vector<std::uint8_t>& s, std::size_t& n) {
    double x = 0, y = 0;
    n = 0;
    for (int j = 0; j < W; ++j)
      for (int i = 0; i < W; ++i)
        if (s[static_cast<std::size_t>(j) * W + i]) {
          x += i;
          y += j;
          ++n;
        }
    return n ? Vec2{x / n, y / n} : Vec2{};
  };
  std::size_t ng = 0, nm = 0;
  const Vec2 cg = centroid(G, ng);
  const Vec2 cm = centroid(M, nm);
  const int sx0 = static_cast<int>(std::lround(cm.x - cg.x));
  const int sy0 = static_cast<int>(std::lround(cm.y - cg.y));
  std::size_t best_overlap = 0;
  for (int sy = sy0 - 3; sy <= sy0 + 3; ++sy)
    for (int sx = sx0 - 3; sx <= sx0 + 3; ++sx) {
      std::size_t overlap = 0;
      for (int j = 0; j < W; ++j)
        for (int i = 0; i < W; ++i) {
          if (!G[static_cast<std::size_t>(j) * W + i]) continue;
          const int ii = i + sx, jj = j + sy;
          if (ii < 0 || jj < 0 || ii >= W || jj >= W) continue;
          overlap += M[static_cast<std::size_t>(jj) * W + ii];
        }
      best_overlap = std::max(best_overlap, overlap);
    }
  return ng + nm - 2 * best_overlap;
}

}  // namespace

GridResult grid_minimize(const Anisotropy& a, ClusterKind kind, double m, double R, int W,
                         const GridOptions& options, Direction n_hat) {
  if (W < 64 || W > 512) throw Error(ErrorCode::InvalidArgument, "grid width must lie in [64, 512]");
  if (!(R > 0.0) || !(m >= 0.0)) throw Error(ErrorCode::InvalidArgument, "need R > 0 and m >= 0");
  if (!a.is_regular()) throw Error(ErrorCode::NotRegular, a.name() + " is not a regular anisotropy");

  GridResult result;
  GridPartition& g = result.grid;
  g.width = W;
  g.cell = 2.0 * R / W;
  g.origin = {-R, -R};
  const std::size_t N = static_cast<std::size_t>(W) * W;
  g.labels.assign(N, 0);
  g.frozen.assign(N, 0);

  std::size_t free_cells = 0;
  // Outer frame, two cells deep, frozen as well.
  for (int j = 0; j < W; ++j)
    for (int i = 0; i < W; ++i)
      if (norm(g.center(i, j)) > R || std::min({i, j, W - 1 - i, W - 1 - j}) < 2)
        g.frozen[static_cast<std::size_t>(j) * W + i] = 1;
      else ++free_cells;
  g.target_count = static_cast<std::size_t>(std::llround(m / (g.cell * g.cell)));
  if (g.target_count > free_cells)
    throw Error(ErrorCode::ConstraintUnsatisfiable, "m / h^2 exceeds the number of free cells");

  const Cluster exterior = exterior_configuration(a, kind, m, R, n_hat);
  for (int j = 0; j < W; ++j)
    for (int i = 0; i < W; ++i)
      g.labels[static_cast<std::size_t>(j) * W + i] = static_cast<std::uint8_t>(exterior.infinite_chamber_at(g.center(i, j)));

  // E1 starts as the target number of free cells closest to the centre.
  std::vector<std::size_t> order;
  for (std::size_t c = 0; c < N; ++c)
    if (!g.frozen[c]) order.push_back(c);
  auto d2 = [&](std::size_t c) {
    const Vec2 p = g.center(static_cast<int>(c % W), static_cast<int>(c / W));
    return dot(p, p);
  };
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return d2(x) < d2(y); });
  for (std::size_t k = 0; k < g.target_count; ++k) g.labels[order[k]] = 1;

  const Stencil st = fit_stencil(a);
  const std::vector<Nbr> nbr = stencil_neighbours(st, g.cell);
  std::vector<std::uint8_t> infinite, background(N);
  for (const auto& ch : exterior.chambers)
    if (!ch.finite) infinite.push_back(static_cast<std::uint8_t>(ch.label));
  for (std::size_t c = 0; c < N; ++c)
    background[c] = static_cast<std::uint8_t>(exterior.infinite_chamber_at(g.center(static_cast<int>(c % W), static_cast<int>(c / W))));

  const std::vector<std::uint8_t> start = g.labels;
  std::vector<std::uint8_t> best;
  for (int run = 0; run < std::max(1, options.restarts); ++run) {
    g.labels = start;
    Annealer annealer(g, nbr, options.seed + static_cast<std::uint64_t>(run) * 0x9E3779B97F4A7C15ULL);
    annealer.anneal(options.temperature * g.cell * a.max_on_circle(), options.cooling, options.sweeps);
    annealer.descend();
    const double e = polish_local(g, nbr, infinite, background);
    if (best.empty() || e < result.energy) {
      result.energy = e;
      best = g.labels;
    }
  }
  g.labels = std::move(best);
  translate_finite(g, nbr, infinite, background);
  result.energy = lattice_energy(g, nbr);

  result.label1_count = static_cast<std::size_t>(std::count(g.labels.begin(), g.labels.end(), 1));
  result.finite_components = components(g, 1).count;
  result.infinite_touch_ring = true;
  for (const auto& ch : exterior.chambers) {
    if (ch.finite) continue;
    const Components comp = components(g, static_cast<std::uint8_t>(ch.label));
    result.islands += comp.count - comp.touching;
    if (comp.count != 1 || comp.touching != 1) result.infinite_touch_ring = false;
  }

  if (m > 0.0) {
    const auto e1 = exterior.finite_boundary();
    std::vector<std::uint8_t> G(N), M(N);
    for (std::size_t c = 0; c < N; ++c) {
      G[c] = g.labels[c] == 1;
      M[c] = point_in_polygon(g.center(static_cast<int>(c % W), static_cast<int>(c / W)), e1) ? 1 : 0;
    }
    result.symmetric_difference =
        static_cast<double>(symmetric_difference_cells(G, M, W)) * g.cell * g.cell / m;
  } else {
    for (int j = 0; j < W; ++j)
      for (int i = 0; i < W; ++i) {
        const std::uint8_t l = g.at(i, j);
        bool near = false;
        for (int dj = -1; dj <= 1 && !near; ++dj)
          for (int di = -1; di <= 1 && !near; ++di)
            near = exterior.infinite_chamber_at(g.center(i + di, j + dj)) == l;
        if (!near) ++result.boundary_mismatch;
      }
  }
  return result;
}

}  // namespace wulff
