#include <algorithm>

#include "geomdep/kernels.hpp"

namespace geomdep::kernels::scalar {

void maxmin_angular(const double* w, std::size_t n, double a, double b, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    const double v = 1.0 - w[i];
    out[i] = a * std::max(w[i], v) + b * std::min(w[i], v);
  }
}

// Four partial sums, combined as (s0 + s2) + (s1 + s3), so the result matches
// the lane order of the vector version.
double dot(const double* x, const double* y, std::size_t n) {
  double s[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    for (int j = 0; j < 4; ++j) s[j] += x[i + j] * y[i + j];
  }
  double total = (s[0] + s[2]) + (s[1] + s[3]);
  for (; i < n; ++i) total += x[i] * y[i];
  return total;
}

std::size_t count_joint_exceed(const double* x, const double* y, std::size_t n, double ux, double uy) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) count += (x[i] > ux && y[i] > uy) ? 1 : 0;
  return count;
}

std::size_t count_in_rect(const double* x, const double* y, std::size_t n, double x_lo, double x_hi,
                          double y_lo, double y_hi) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i)
    count += (x[i] > x_lo && x[i] < x_hi && y[i] > y_lo && y[i] < y_hi) ? 1 : 0;
  return count;
}

void to_radial_angular(const double* x, const double* y, std::size_t n, double* r, double* w) {
  for (std::size_t i = 0; i < n; ++i) {
    const double s = x[i] + y[i];
    r[i] = s;
    w[i] = x[i] / s;
  }
}

}  // namespace geomdep::kernels::scalar
