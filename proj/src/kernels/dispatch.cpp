#include <atomic>
#include <cstdlib>
#include <string_view>

#include "wulff_clusters/kernels.hpp"

namespace wulff::kernels {

namespace {

Isa detect() {
#if defined(WULFF_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return Isa::avx2;
#endif
  return Isa::scalar;
}

Isa initial_isa() {
  const Isa detected = detect();
  if (const char* env = std::getenv("WULFF_CLUSTERS_ISA")) {
    if (std::string_view(env) == "scalar") return Isa::scalar;
  }
  return detected;
}

std::atomic<Isa>& active() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

}  // namespace

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
  }
  return "unknown";
}

Isa detected_isa() {
  static const Isa isa = detect();
  return isa;
}

Isa active_isa() { return active().load(std::memory_order_relaxed); }

void force_isa(std::optional<Isa> isa) {
  Isa chosen = isa.value_or(detected_isa());
  if (chosen == Isa::avx2 && detected_isa() != Isa::avx2) chosen = Isa::scalar;
  active().store(chosen, std::memory_order_relaxed);
}

double shoelace_twice_area(std::span<const Vec2> polygon) {
#if defined(WULFF_HAVE_AVX2_KERNELS)
  if (active_isa() == Isa::avx2) return avx2::shoelace_twice_area(polygon);
#endif
  return scalar::shoelace_twice_area(polygon);
}

double sqrt_form_energy(std::span<const double> dx, std::span<const double> dy,
                        std::span<const QuadraticForm> forms, std::span<double> gx,
                        std::span<double> gy) {
#if defined(WULFF_HAVE_AVX2_KERNELS)
  if (active_isa() == Isa::avx2) return avx2::sqrt_form_energy(dx, dy, forms, gx, gy);
#endif
  return scalar::sqrt_form_energy(dx, dy, forms, gx, gy);
}

}  // namespace wulff::kernels
