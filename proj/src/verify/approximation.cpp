#include <algorithm>

#include "wulff_clusters/errors.hpp"
#include "wulff_clusters/verify.hpp"

namespace wulff {

std::vector<ApproximationRow> approximation_chain(const Anisotropy& phi, std::span<const double> eps,
                                                  Direction n_hat, double m, std::size_t resolution) {
  if (eps.empty()) throw Error(ErrorCode::InvalidArgument, "empty epsilon sequence");
  const double eps_ref = *std::min_element(eps.begin(), eps.end()) / 5.0;
  const Anisotropy ref = smooth_approximation(phi, eps_ref).anisotropy;
  const LensShape ref_lens = build_lens(ref, n_hat, m, resolution);
  const TriodShape ref_triod = build_triod(ref, n_hat, m, resolution);
  const WulffBoundary target = boundary_by_halfplane_intersection(phi, 4096);

  std::vector<ApproximationRow> rows;
  for (double e : eps) {
    const SmoothApproximation s = smooth_approximation(phi, e);
    ApproximationRow row;
    row.eps = e;
    row.sup_gap = sup_gap(s.anisotropy, phi);
    const WulffBoundary w = boundary_by_gradient_map(s.anisotropy, std::max<std::size_t>(resolution, 64));
    row.wulff_gap = hausdorff_gap(w.vertices, true, target.vertices, true, false);
    row.lens_gap = hausdorff_gap(build_lens(s.anisotropy, n_hat, m, resolution).boundary(), true,
                                 ref_lens.boundary(), true, true);
    row.triod_gap = hausdorff_gap(build_triod(s.anisotropy, n_hat, m, resolution).boundary(), true,
                                  ref_triod.boundary(), true, true);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace wulff
