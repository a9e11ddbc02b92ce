#pragma once

// Data-parallel inner loops. Every kernel has a scalar reference version and,
// on x86-64, an AVX2+FMA version; the entry points in `wulff::kernels`
// dispatch at runtime on the detected CPU features. The two variants agree to
// rounding (summation order differs), which the kernel tests check.

#include <optional>
#include <span>
#include <string_view>

#include "wulff_clusters/geometry.hpp"

namespace wulff::kernels {

// Symmetric positive semi-definite quadratic form q(d) = d^T Q d.
struct QuadraticForm {
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;
};

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa);

// Best ISA supported by both the build and the running CPU.
Isa detected_isa();
// ISA actually used by the dispatching entry points.
Isa active_isa();
// Pins the dispatch (tests use this); std::nullopt restores detection. The
// environment variable WULFF_CLUSTERS_ISA=scalar has the same effect at
// startup.
void force_isa(std::optional<Isa> isa);

// Twice the signed area of the implicitly closed polygon.
double shoelace_twice_area(std::span<const Vec2> polygon);

// Sum over edges e of sum_k sqrt(q_k(d_e)) with d_e = (dx[e], dy[e]).
// When gx/gy are non-empty they receive the per-edge gradient
// sum_k Q_k d_e / sqrt(q_k(d_e)); a zero-length edge contributes 0 to both.
double sqrt_form_energy(std::span<const double> dx, std::span<const double> dy,
                        std::span<const QuadraticForm> forms, std::span<double> gx,
                        std::span<double> gy);

namespace scalar {
double shoelace_twice_area(std::span<const Vec2> polygon);
double sqrt_form_energy(std::span<const double> dx, std::span<const double> dy,
                        std::span<const QuadraticForm> forms, std::span<double> gx,
                        std::span<double> gy);
}  // namespace scalar

#if defined(WULFF_HAVE_AVX2_KERNELS)
namespace avx2 {
double shoelace_twice_area(std::span<const Vec2> polygon);
double sqrt_form_energy(std::span<const double> dx, std::span<const double> dy,
                        std::span<const QuadraticForm> forms, std::span<double> gx,
                        std::span<double> gy);
}  // namespace avx2
#endif

}  // namespace wulff::kernels
