// Compiled with -mavx2 -mfma; only reached through the runtime dispatcher.

#include <immintrin.h>

#include <cmath>

#include "wulff_clusters/kernels.hpp"

namespace wulff::kernels::avx2 {

static_assert(sizeof(Vec2) == 2 * sizeof(double), "Vec2 must be two packed doubles");

namespace {

double horizontal_sum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

double shoelace_twice_area(std::span<const Vec2> p) {
  const std::size_t n = p.size();
  if (n < 3) return 0.0;
  const double* raw = reinterpret_cast<const double*>(p.data());

  // Lanes hold [x_i*y_{i+1}, y_i*x_{i+1}, x_{i+1}*y_{i+2}, y_{i+1}*x_{i+2}].
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 < n; i += 2) {
    const __m256d a = _mm256_loadu_pd(raw + 2 * i);
    const __m256d b = _mm256_loadu_pd(raw + 2 * (i + 1));
    const __m256d b_swapped = _mm256_permute_pd(b, 0b0101);
    acc = _mm256_fmadd_pd(a, b_swapped, acc);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double total = (lanes[0] - lanes[1]) + (lanes[2] - lanes[3]);
  for (; i + 1 < n; ++i) total += p[i].x * p[i + 1].y - p[i].y * p[i + 1].x;
  total += p[n - 1].x * p[0].y - p[n - 1].y * p[0].x;
  return total;
}

double sqrt_form_energy(std::span<const double> dx, std::span<const double> dy,
                        std::span<const QuadraticForm> forms, std::span<double> gx,
                        std::span<double> gy) {
  const bool want_grad = !gx.empty();
  const std::size_t n = dx.size();
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);

  __m256d energy = zero;
  std::size_t e = 0;
  for (; e + 4 <= n; e += 4) {
    const __m256d x = _mm256_loadu_pd(dx.data() + e);
    const __m256d y = _mm256_loadu_pd(dy.data() + e);
    __m256d ge_x = zero;
    __m256d ge_y = zero;
    for (const auto& q : forms) {
      const __m256d qxx = _mm256_set1_pd(q.xx);
      const __m256d qxy = _mm256_set1_pd(q.xy);
      const __m256d qyy = _mm256_set1_pd(q.yy);
      const __m256d qx = _mm256_fmadd_pd(qxx, x, _mm256_mul_pd(qxy, y));
      const __m256d qy = _mm256_fmadd_pd(qxy, x, _mm256_mul_pd(qyy, y));
      const __m256d s = _mm256_sqrt_pd(_mm256_fmadd_pd(qx, x, _mm256_mul_pd(qy, y)));
      energy = _mm256_add_pd(energy, s);
      if (want_grad) {
        const __m256d positive = _mm256_cmp_pd(s, zero, _CMP_GT_OQ);
        const __m256d inv = _mm256_and_pd(positive, _mm256_div_pd(one, s));
        ge_x = _mm256_fmadd_pd(qx, inv, ge_x);
        ge_y = _mm256_fmadd_pd(qy, inv, ge_y);
      }
    }
    if (want_grad) {
      _mm256_storeu_pd(gx.data() + e, ge_x);
      _mm256_storeu_pd(gy.data() + e, ge_y);
    }
  }
  double total = horizontal_sum(energy);
  if (e < n) {
    total += scalar::sqrt_form_energy(dx.subspan(e), dy.subspan(e), forms,
                                      want_grad ? gx.subspan(e) : gx,
                                      want_grad ? gy.subspan(e) : gy);
  }
  return total;
}

}  // namespace wulff::kernels::avx2
