#pragma once

// Numerical checks of local minimality for the standard clusters:
// fixed-topology constrained minimisation, random perturbations and a
// topology-free lattice minimiser.

#include <cstdint>
#include <optional>
#include <string>
#include <span>
#include <utility>
#include <vector>

#include "wulff_clusters/clusters.hpp"

namespace wulff {

// ------------------------------------------------------------ energy problem

// Polygonal cluster with fixed topology. Free vertices are packed as
// x = (x0, y0, x1, y1, ...); anchors on the circle are fixed and indexed
// after the free vertices.
class DiscreteEnergyProblem {
 public:
  struct Chain {
    int first = 0;
    int second = 0;
    std::vector<int> vertices;  // indices into free vertices, then anchors
  };

  // Topology and anchors of `c`. Straight infinite/infinite interfaces are
  // split into `segment_subdivisions` edges (interior vertices are free).
  // Throws InvalidArgument when m is not below the disk area, or an arc has
  // fewer than 8 vertices.
  static DiscreteEnergyProblem from_cluster(const Anisotropy& a, const Cluster& c,
                                            std::size_t segment_subdivisions = 1);

  const Anisotropy& anisotropy() const { return anisotropy_; }
  ClusterKind kind() const { return kind_; }
  double mass() const { return mass_; }
  double radius() const { return radius_; }
  std::size_t free_vertex_count() const { return free_count_; }
  std::size_t dimension() const { return 2 * free_count_; }
  const std::vector<Vec2>& anchors() const { return anchors_; }
  const std::vector<Chain>& chains() const { return chains_; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  const std::vector<int>& junction_vertices() const { return junctions_; }
  const std::vector<int>& finite_cycle() const { return cycle_; }

  // Free-vertex coordinates of the template cluster.
  const std::vector<double>& initial() const { return initial_; }

  Vec2 vertex(std::span<const double> x, int index) const;

  // Sum over edges of gamma(v - u), gamma = phi o R_{-90}; gradient optional.
  double energy(std::span<const double> x, std::span<double> gradient = {}) const;
  // Area of E1 and its gradient (optional).
  double area(std::span<const double> x, std::span<double> gradient = {}) const;
  // Adds scale * Hessian of the energy (resp. area) to the dense row-major
  // matrix h of size dimension()^2.
  void add_energy_hessian(std::span<const double> x, std::span<double> h, double scale = 1.0) const;
  void add_area_hessian(std::span<double> h, double scale) const;

  std::vector<Vec2> finite_boundary(std::span<const double> x) const;
  // Template cluster with vertices moved to x.
  Cluster to_cluster(std::span<const double> x) const;
  // Discrete Young residual |sum grad phi(R_{-90} tau_i)| at each junction,
  // tau_i the unit direction of the incident edges leaving the junction.
  std::vector<double> junction_residuals(std::span<const double> x) const;
  // Longest edge on the arcs of E1.
  double max_arc_step(std::span<const double> x) const;

 private:
  DiscreteEnergyProblem(Anisotropy a, Cluster templ) : anisotropy_(std::move(a)), template_(std::move(templ)) {}

  void check_dimension(std::span<const double> x) const;

  Anisotropy anisotropy_;
  Cluster template_;
  ClusterKind kind_ = ClusterKind::lens;
  double mass_ = 0.0;
  double radius_ = 0.0;
  std::size_t free_count_ = 0;
  std::vector<Vec2> anchors_;
  std::vector<Chain> chains_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<int> junctions_;
  std::vector<int> cycle_;
  std::vector<double> initial_;
  std::optional<std::vector<kernels::QuadraticForm>> forms_;
};

// Energy of the polygonal cluster; throws DimensionMismatch on a wrong size.
double polyline_energy(const DiscreteEnergyProblem& p, std::span<const double> x);

// --------------------------------------------------------------- minimiser

struct MinimizeOptions {
  int max_outer = 60;
  int max_inner = 3000;  // total damped Newton steps
  // Initial weight of the fading spring term on arc edges, as a fraction of
  // the starting energy at uniform spacing; 0 disables it.
  double spring = 0.1;
};

struct MinimizeResult {
  std::vector<double> x;
  double energy = 0.0;
  double area_error = 0.0;     // |area - m| / m
  double gradient_norm = 0.0;  // |grad E - y grad A|
  double multiplier = 0.0;     // y, the pressure of E1
  int iterations = 0;          // total Newton steps
  bool converged = false;
};

// Augmented Lagrangian on area(E1) = m; each inner problem is solved by
// Newton's method with Levenberg-Marquardt damping.
// Converged means |area - m| <= 1e-8 m and the Lagrangian gradient norm is at
// most tol; otherwise the best iterate is returned with converged = false.
// Throws InvalidArgument for tol <= 0 or an initial area off by more than 50%.
MinimizeResult minimize_fixed_topology(const DiscreteEnergyProblem& p, std::span<const double> init,
                                       double tol, const MinimizeOptions& options = {});

// Scales the E1 vertices about their centroid so the area equals m.
std::vector<double> reproject_area(const DiscreteEnergyProblem& p, std::span<const double> x);

// Squash E1 along `axis` by `factor` (about the centroid), then re-project the area.
std::vector<double> squashed_initialization(const DiscreteEnergyProblem& p, Vec2 axis, double factor);

// Smooth random displacement field (plane waves with wavelengths in [R, 2R],
// standard deviation sigma per component) plus an independent jitter of a
// tenth of the shortest incident edge, then re-projected to area m. Retries
// until the cluster is embedded; InvalidArgument if that never happens.
std::vector<double> jittered_initialization(const DiscreteEnergyProblem& p, double sigma,
                                            std::uint64_t seed);

// ------------------------------------------------------------ perturbations

enum class PerturbationKind { bump, translation };

struct PerturbationReport {
  std::size_t trials = 0;
  double energy_standard = 0.0;
  double min_gap = 0.0;
  double max_gap = 0.0;
  std::size_t violations = 0;  // gaps below -1e-9
  bool passed() const { return violations == 0; }
};

// Random smooth compactly supported displacements of the free vertices
// (amplitude <= 0.1 R), the area of E1 restored by a uniform normal offset of
// one arc, compared against the unperturbed energy. `translation` moves the
// whole finite part rigidly along the first exterior ray instead.
PerturbationReport perturbation_test(const Anisotropy& a, const Cluster& c, std::size_t trials,
                                     double amplitude, std::uint64_t seed = 1,
                                     PerturbationKind kind = PerturbationKind::bump);

// ----------------------------------------------------------------- Hausdorff

// Symmetric Hausdorff distance, optionally minimised over translations of
// `a` (Nelder-Mead on the two translation components).
double hausdorff_gap(std::span<const Vec2> a, bool a_closed, std::span<const Vec2> b,
                     bool b_closed, bool modulo_translation);
// Between the interface sets of two clusters; TopologyMismatch unless the
// chamber and interface labels agree.
double hausdorff_gap(const Cluster& a, const Cluster& b, bool modulo_translation);

// --------------------------------------------------------------- lattice

// Pairwise cut stencil: offsets e_k (cells) with weights w_k >= 0 such that
// sum_k w_k |e_k . nu| approximates phi(nu).
struct Stencil {
  std::vector<std::pair<int, int>> offsets;
  std::vector<double> weights;
  double density(Vec2 nu) const;
};
Stencil fit_stencil(const Anisotropy& a);

struct GridPartition {
  int width = 0;
  double cell = 0.0;
  Vec2 origin;  // lower-left corner
  std::vector<std::uint8_t> labels;
  std::vector<std::uint8_t> frozen;
  std::size_t target_count = 0;

  Vec2 center(int i, int j) const { return origin + Vec2{(i + 0.5) * cell, (j + 0.5) * cell}; }
  std::uint8_t at(int i, int j) const { return labels[static_cast<std::size_t>(j) * width + i]; }
};

struct GridOptions {
  std::uint64_t seed = 1;
  int sweeps = 1000;
  double cooling = 0.99;
  // Starting temperature in units of h * max phi.
  double temperature = 1.0;
  // Independent annealing runs; the lowest lattice energy is kept.
  int restarts = 8;
};

struct GridResult {
  GridPartition grid;
  double energy = 0.0;
  std::size_t label1_count = 0;
  std::size_t finite_components = 0;
  std::size_t islands = 0;          // extra components of infinite chambers
  bool infinite_touch_ring = false;  // every infinite chamber reaches the frozen ring
  double symmetric_difference = 0.0;  // |G delta analytic| / m, modulo translation
  std::size_t boundary_mismatch = 0;  // m = 0: cells off the exterior configuration
                                      // by more than one cell

  bool passed(double symdiff_tol = 0.15) const {
    return islands == 0 && infinite_touch_ring &&
           (target_count() == 0 ? boundary_mismatch == 0
                                : finite_components == 1 && symmetric_difference <= symdiff_tol);
  }
  std::size_t target_count() const { return grid.target_count; }
};

// Simulated annealing with geometric cooling, greedy descent and minimum-cut
// polishing (expansion moves, E1 re-solved at fixed count), restarted and
// the lowest energy kept, over labelings of a W x W grid covering [-R, R]^2, cells
// outside B_R frozen to the exterior configuration, |E1| fixed by exchange
// moves. W in [64, 512]; m may be 0. ConstraintUnsatisfiable when m / h^2
// exceeds the free cell count.
GridResult grid_minimize(const Anisotropy& a, ClusterKind kind, double m, double R, int W,
                         const GridOptions& options = {},
                         Direction n_hat = Direction::from_degrees(90.0));

// ------------------------------------------------------- approximation chain

struct ApproximationRow {
  double eps = 0.0;
  double sup_gap = 0.0;
  double wulff_gap = 0.0;  // Hausdorff(W_{phi_eps}, W_phi)
  double lens_gap = 0.0;   // lens(phi_eps) vs reference lens, modulo translation
  double triod_gap = 0.0;
};

// For each eps: smooth_approximation(phi, eps) and its distance to phi, to
// W_phi and to the lens/triod of the finest reference eps_ref = min(eps) / 5.
std::vector<ApproximationRow> approximation_chain(const Anisotropy& phi, std::span<const double> eps,
                                                  Direction n_hat, double m,
                                                  std::size_t resolution = kDefaultResolution);

// ------------------------------------------------------------ full report

struct VerifyConfig {
  ClusterKind kind = ClusterKind::lens;
  Direction n_hat = Direction::from_degrees(90.0);
  double mass = 1.0;
  double radius = 10.0;
  int seeds = 8;
  double tol = 1e-7;
  std::size_t resolution = 256;        // arc sampling for the optimiser
  std::size_t trials = 500;
  double amplitude_fraction = 0.02;    // perturbation amplitude / R
  double jitter_fraction = 0.05;       // init jitter sigma / R
  int grid = 0;                        // lattice width, 0 disables
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

struct SeedRun {
  std::uint64_t seed = 0;
  std::string init;
  double energy_initial = 0.0;
  double energy_found = 0.0;
  double hausdorff_gap = 0.0;
  double hausdorff_tolerance = 0.0;
  double area_error = 0.0;
  double gradient_norm = 0.0;
  std::vector<double> young_residuals;
  bool converged = false;
  bool passed = false;
};

struct VerificationReport {
  VerifyConfig config;
  std::string anisotropy;
  double energy_standard = 0.0;       // high-resolution standard cluster
  double energy_discrete = 0.0;       // standard cluster at the optimiser resolution
  std::vector<double> young_residuals;  // of the constructed standard cluster
  std::vector<SeedRun> runs;
  PerturbationReport perturbation;
  std::optional<GridResult> grid;
  bool passed = false;
};

// Reference energy used by the minimality checks: the standard cluster at
// resolution 2^16 (a proxy for the smooth one).
double reference_energy(const Anisotropy& a, ClusterKind kind, Direction n_hat, double m, double R);

// Energy tolerance for "within 1e-4 E" and "not below E - 10 tol".
bool energy_within(double found, double standard, double tol);

VerificationReport run_verification(const Anisotropy& a, const VerifyConfig& config);

}  // namespace wulff
