#include <cmath>

#include "wulff_clusters/kernels.hpp"

namespace wulff::kernels::scalar {

double shoelace_twice_area(std::span<const Vec2> p) {
  const std::size_t n = p.size();
  if (n < 3) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) acc += p[i].x * p[i + 1].y - p[i].y * p[i + 1].x;
  acc += p[n - 1].x * p[0].y - p[n - 1].y * p[0].x;
  return acc;
}

double sqrt_form_energy(std::span<const double> dx, std::span<const double> dy,
                        std::span<const QuadraticForm> forms, std::span<double> gx,
                        std::span<double> gy) {
  const bool want_grad = !gx.empty();
  double energy = 0.0;
  for (std::size_t e = 0; e < dx.size(); ++e) {
    const double x = dx[e];
    const double y = dy[e];
    double ge_x = 0.0;
    double ge_y = 0.0;
    for (const auto& q : forms) {
      const double qx = q.xx * x + q.xy * y;
      const double qy = q.xy * x + q.yy * y;
      const double s = std::sqrt(qx * x + qy * y);
      energy += s;
      if (want_grad && s > 0.0) {
        ge_x += qx / s;
        ge_y += qy / s;
      }
    }
    if (want_grad) {
      gx[e] = ge_x;
      gy[e] = ge_y;
    }
  }
  return energy;
}

}  // namespace wulff::kernels::scalar
