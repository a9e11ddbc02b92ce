#include <atomic>
#include <cmath>
#include <random>
#include <thread>

#include "wulff_clusters/errors.hpp"
#include "wulff_clusters/verify.hpp"

namespace wulff {

double reference_energy(const Anisotropy& a, ClusterKind kind, Direction n_hat, double m, double R) {
  return cluster_perimeter(a, standard_cluster(kind, a, n_hat, m, R, std::size_t{1} << 16));
}

bool energy_within(double found, double standard, double tol) {
  return std::abs(found - standard) <= 1e-4 * standard && found >= standard - 10.0 * tol;
}

namespace {

SeedRun run_seed(const DiscreteEnergyProblem& p, const VerifyConfig& cfg, double e_std, double step,
                 std::uint64_t index) {
  SeedRun run;
  run.seed = index;
  std::vector<double> init;
  if (index % 2 == 1) {
    run.init = "squashed";
    // Seed 1 squashes along n_hat by 0.5; later ones use a random axis and factor.
    Vec2 axis = cfg.n_hat.vec();
    double factor = 0.5;
    if (index > 1) {
      std::mt19937_64 rng(cfg.seed * 1000003 + index);
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      const double t = kTwoPi * unit(rng);
      axis = {std::cos(t), std::sin(t)};
      factor = 0.5 + 0.3 * unit(rng);
    }
    init = squashed_initialization(p, axis, factor);
  } else {
    run.init = "jitter";
    init = jittered_initialization(p, cfg.jitter_fraction * cfg.radius, cfg.seed * 1000003 + index);
  }
  run.energy_initial = p.energy(init);
  const MinimizeResult r = minimize_fixed_topology(p, init, cfg.tol);
  run.energy_found = r.energy;
  run.area_error = r.area_error;
  run.gradient_norm = r.gradient_norm;
  run.converged = r.converged;
  run.young_residuals = p.junction_residuals(r.x);
  run.hausdorff_tolerance = 5.0 * step;
  run.hausdorff_gap = hausdorff_gap(p.finite_boundary(r.x), true, p.finite_boundary(p.initial()), true, true);
  run.passed = run.converged && energy_within(run.energy_found, e_std, cfg.tol) &&
               run.hausdorff_gap <= run.hausdorff_tolerance;
  return run;
}

}  // namespace

VerificationReport run_verification(const Anisotropy& a, const VerifyConfig& cfg) {
  if (!(cfg.tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol must be positive");
  if (cfg.seeds < 0) throw Error(ErrorCode::InvalidArgument, "seeds must be non-negative");
  if (cfg.resolution < 64) throw Error(ErrorCode::InvalidArgument, "resolution must be at least 64");

  VerificationReport rep;
  rep.config = cfg;
  rep.anisotropy = a.name();
  const Cluster c = standard_cluster(cfg.kind, a, cfg.n_hat, cfg.mass, cfg.radius, cfg.resolution);
  for (const auto& t : c.junction_triples) rep.young_residuals.push_back(young_residual(a, {t.n_hat, t.nu1, t.nu2}));
  rep.energy_standard = reference_energy(a, cfg.kind, cfg.n_hat, cfg.mass, cfg.radius);

  const DiscreteEnergyProblem p = DiscreteEnergyProblem::from_cluster(a, c);
  rep.energy_discrete = p.energy(p.initial());
  const double step = p.max_arc_step(p.initial());

  rep.runs.resize(static_cast<std::size_t>(cfg.seeds));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < rep.runs.size(); i = next++)
      rep.runs[i] = run_seed(p, cfg, rep.energy_standard, step, i + 1);
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(cfg.threads, static_cast<unsigned>(rep.runs.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  rep.perturbation = perturbation_test(a, c, cfg.trials, cfg.amplitude_fraction * cfg.radius, cfg.seed);

  bool ok = rep.perturbation.passed();
  for (const auto& r : rep.runs) ok = ok && r.passed;
  if (cfg.grid > 0) {
    GridOptions go;
    go.seed = cfg.seed;
    rep.grid = grid_minimize(a, cfg.kind, cfg.mass, cfg.radius, cfg.grid, go, cfg.n_hat);
    // Shape comparison from W = 256 up.
    ok = ok && (cfg.grid >= 256 ? rep.grid->passed()
                                : rep.grid->islands == 0 && rep.grid->infinite_touch_ring &&
                                      rep.grid->finite_components == 1);
  }
  rep.passed = ok;
  return rep;
}

}  // namespace wulff
