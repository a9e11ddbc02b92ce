// wulff-clusters: Wulff shapes, standard lens/triod clusters and their
// numerical minimality checks from the command line.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "wulff_clusters/errors.hpp"
#include "wulff_clusters/io.hpp"

namespace {

using namespace wulff;

struct Options {
  std::string aniso = "euclidean";
  double smooth = 0.0;
  double nhat_deg = 90.0;
  double m = 1.0;
  double R = 10.0;
  std::size_t res = kDefaultResolution;
  std::uint64_t seed = 1;
  std::string out;
  std::string svg;
  double tol = 1e-7;
  int grid = 0;
  int seeds = 8;
  std::size_t trials = 500;
  std::string kind = "lens";
  std::vector<double> eps{0.2, 0.1, 0.05};
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

void validate(const Options& o) {
  require(o.m > 0.0 && std::isfinite(o.m), "--m must be positive");
  require(o.R > 0.0 && std::isfinite(o.R), "--R must be positive");
  require(o.res >= 64, "--res must be at least 64");
  require(o.tol > 0.0, "--tol must be positive");
  require(o.seeds >= 0, "--seeds must be non-negative");
  require(o.grid == 0 || (o.grid >= 64 && o.grid <= 512), "--grid must be 0 or in [64, 512]");
  require(o.smooth >= 0.0 && o.smooth <= 1.0, "--smooth must lie in (0, 1]");
  require(std::isfinite(o.nhat_deg), "--nhat-deg must be finite");
}

Anisotropy anisotropy(const Options& o) {
  Anisotropy a = io::parse_anisotropy(o.aniso);
  if (o.smooth > 0.0) a = smooth_approximation(a, o.smooth).anisotropy;
  return a;
}

Direction n_hat(const Options& o) {
  double d = std::fmod(o.nhat_deg, 360.0);
  if (d < 0.0) d += 360.0;
  return Direction::from_degrees(d);
}

void write_file(const std::string& path, const std::string& text) {
  if (path.empty()) return;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path);
  f << text;
}

unsigned worker_threads() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("WULFF_CLUSTERS_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1) n = std::min(n, static_cast<unsigned>(cap));
  }
  return n;
}

int cmd_wulff(const Options& o) {
  const Anisotropy a = anisotropy(o);
  const WulffBoundary w =
      a.is_regular() ? boundary_by_gradient_map(a, o.res) : boundary_by_halfplane_intersection(a, o.res);
  const double ar = area(w);
  const double per = aniso_perimeter(a, w.vertices, true);
  const double diam = diameter(w);
  std::printf("anisotropy %s\narea %.12g\nperimeter %.12g\ndiameter %.12g\n", a.name().c_str(), ar, per, diam);
  io::json j = io::to_json(w);
  j["anisotropy"] = io::to_json(a);
  j["area"] = ar;
  j["perimeter"] = per;
  j["diameter"] = diam;
  write_file(o.out, io::dump(j));
  write_file(o.svg, io::wulff_svg(w));
  return 0;
}

int cmd_cluster(const Options& o, ClusterKind kind) {
  const Anisotropy a = anisotropy(o);
  const Cluster c = standard_cluster(kind, a, n_hat(o), o.m, o.R, o.res);
  const double energy = cluster_perimeter(a, c);
  const ClusterReport report = check_cluster(a, c);
  std::printf("%s cluster, anisotropy %s\nenergy %.12g\nlambda %.12g\n", to_string(kind), a.name().c_str(), energy,
              c.lambda);
  std::vector<double> residuals;
  for (const auto& t : c.junction_triples) {
    residuals.push_back(young_residual(a, {t.n_hat, t.nu1, t.nu2}));
    std::printf("young residual %.3e\n", residuals.back());
  }
  io::json j{{"anisotropy", io::to_json(a)},
             {"cluster", io::to_json(c)},
             {"energy", energy},
             {"young_residuals", residuals},
             {"checks", io::to_json(report)}};
  write_file(o.out, io::dump(j));
  write_file(o.svg, io::cluster_svg(c));
  return 0;
}

int cmd_verify(const Options& o) {
  require(o.kind == "lens" || o.kind == "triod", "verify expects 'lens' or 'triod'");
  const Anisotropy a = anisotropy(o);
  VerifyConfig cfg;
  cfg.kind = o.kind == "lens" ? ClusterKind::lens : ClusterKind::triod;
  cfg.n_hat = n_hat(o);
  cfg.mass = o.m;
  cfg.radius = o.R;
  cfg.seeds = o.seeds;
  cfg.tol = o.tol;
  cfg.trials = o.trials;
  cfg.grid = o.grid;
  cfg.seed = o.seed;
  cfg.threads = worker_threads();
  if (o.res != kDefaultResolution) cfg.resolution = o.res;
  const VerificationReport r = run_verification(a, cfg);

  std::printf("verify %s, anisotropy %s\nenergy_standard %.12g\n", o.kind.c_str(), a.name().c_str(),
              r.energy_standard);
  for (const auto& run : r.runs) {
    double young = 0.0;
    for (double v : run.young_residuals) young = std::max(young, v);
    std::printf("seed %llu %-8s energy %.12g gap %.3e hausdorff %.3e young %.2e %s\n",
                static_cast<unsigned long long>(run.seed), run.init.c_str(), run.energy_found,
                run.energy_found - r.energy_standard, run.hausdorff_gap, young, run.passed ? "ok" : "FAIL");
  }
  std::printf("perturbation trials %zu min_gap %.3e violations %zu %s\n", r.perturbation.trials,
              r.perturbation.min_gap, r.perturbation.violations, r.perturbation.passed() ? "ok" : "FAIL");
  if (r.grid)
    std::printf("grid %d components %zu islands_found %zu symdiff %.3f\n", r.grid->grid.width,
                r.grid->finite_components, r.grid->islands, r.grid->symmetric_difference);
  std::printf("%s\n", r.passed ? "PASS" : "FAIL");
  write_file(o.out, io::dump(io::to_json(r)));
  if (!o.svg.empty()) write_file(o.svg, io::cluster_svg(standard_cluster(cfg.kind, a, cfg.n_hat, o.m, o.R)));
  return r.passed ? 0 : 1;
}

int cmd_approx(const Options& o) {
  const Anisotropy a = io::parse_anisotropy(o.aniso);
  require(!o.eps.empty(), "--eps needs at least one value");
  for (double e : o.eps) require(e > 0.0 && e <= 1.0, "--eps values must lie in (0, 1]");
  const auto rows = approximation_chain(a, o.eps, n_hat(o), o.m, o.res);
  std::printf("%-8s %-12s %-12s %-12s %-12s\n", "eps", "sup_gap", "wulff_gap", "lens_gap", "triod_gap");
  for (const auto& r : rows)
    std::printf("%-8g %-12.4e %-12.4e %-12.4e %-12.4e\n", r.eps, r.sup_gap, r.wulff_gap, r.lens_gap, r.triod_gap);
  io::json j{{"anisotropy", io::to_json(a)}, {"rows", io::to_json(rows)}};
  write_file(o.out, io::dump(j));
  return 0;
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--aniso", o.aniso, "anisotropy: euclidean, l1, elliptic:a,b, pnorm:p, smoothed_l1:eps, "
                                      "fourier:c0,c1,..., inline JSON or @file.json");
  sub->add_option("--smooth", o.smooth, "replace the anisotropy by its smooth approximation at this eps");
  sub->add_option("--nhat-deg", o.nhat_deg, "exterior normal angle in degrees");
  sub->add_option("--m", o.m, "area of the finite chamber");
  sub->add_option("--R", o.R, "radius of the ball");
  sub->add_option("--res", o.res, "boundary samples per full turn");
  sub->add_option("--seed", o.seed, "random seed");
  sub->add_option("--out", o.out, "JSON output path");
  sub->add_option("--svg", o.svg, "SVG output path");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anisotropic Wulff shapes and standard lens/triod clusters"};
  app.require_subcommand(1);
  Options o;

  auto* wulff_cmd = app.add_subcommand("wulff", "Wulff shape of an anisotropy");
  add_common(wulff_cmd, o);
  auto* lens_cmd = app.add_subcommand("lens", "standard lens cluster");
  add_common(lens_cmd, o);
  auto* triod_cmd = app.add_subcommand("triod", "standard triod cluster");
  add_common(triod_cmd, o);
  auto* verify_cmd = app.add_subcommand("verify", "numerical minimality checks");
  add_common(verify_cmd, o);
  verify_cmd->add_option("kind", o.kind, "lens or triod");
  verify_cmd->add_option("--tol", o.tol, "stationarity tolerance of the optimiser");
  verify_cmd->add_option("--grid", o.grid, "width of the lattice check (0 disables)");
  verify_cmd->add_option("--seeds", o.seeds, "number of perturbed initialisations");
  verify_cmd->add_option("--trials", o.trials, "number of random perturbations");
  auto* approx_cmd = app.add_subcommand("approx", "smooth approximation sequence");
  add_common(approx_cmd, o);
  approx_cmd->add_option("--eps", o.eps, "smoothing parameters")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    validate(o);
    if (*wulff_cmd) return cmd_wulff(o);
    if (*lens_cmd) return cmd_cluster(o, ClusterKind::lens);
    if (*triod_cmd) return cmd_cluster(o, ClusterKind::triod);
    if (*verify_cmd) return cmd_verify(o);
    if (*approx_cmd) return cmd_approx(o);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const wulff::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    if (e.code() == wulff::ErrorCode::NotRegular)
      std::fprintf(stderr, "hint: pass --smooth <eps> to use a smooth approximation of this anisotropy\n");
    return e.code() == wulff::ErrorCode::NoConvergence ? 1 : 2;
  }
  return 0;
}
