#include <immintrin.h>

#include <algorithm>

#include "geomdep/kernels.hpp"

// Built with -mavx2 -mfma -ffp-contract=off; only called after a runtime CPU check.
// Without contraction every lane performs the same IEEE operations as the scalar
// loop, so results are bit-identical.

namespace geomdep::kernels::avx2 {

void maxmin_angular(const double* w, std::size_t n, double a, double b, double* out) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d va = _mm256_set1_pd(a);
  const __m256d vb = _mm256_set1_pd(b);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vw = _mm256_loadu_pd(w + i);
    const __m256d vv = _mm256_sub_pd(one, vw);
    const __m256d hi = _mm256_max_pd(vw, vv);
    const __m256d lo = _mm256_min_pd(vw, vv);
    _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_mul_pd(va, hi), _mm256_mul_pd(vb, lo)));
  }
  for (; i < n; ++i) {
    const double v = 1.0 - w[i];
    out[i] = a * std::max(w[i], v) + b * std::min(w[i], v);
  }
}

double dot(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  const __m128d pair = _mm_add_pd(_mm256_castpd256_pd128(acc), _mm256_extractf128_pd(acc, 1));
  double total = _mm_cvtsd_f64(pair) + _mm_cvtsd_f64(_mm_unpackhi_pd(pair, pair));
  for (; i < n; ++i) total += x[i] * y[i];
  return total;
}

std::size_t count_joint_exceed(const double* x, const double* y, std::size_t n, double ux, double uy) {
  const __m256d vux = _mm256_set1_pd(ux);
  const __m256d vuy = _mm256_set1_pd(uy);
  std::size_t count = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d cx = _mm256_cmp_pd(_mm256_loadu_pd(x + i), vux, _CMP_GT_OQ);
    const __m256d cy = _mm256_cmp_pd(_mm256_loadu_pd(y + i), vuy, _CMP_GT_OQ);
    count += static_cast<std::size_t>(__builtin_popcount(_mm256_movemask_pd(_mm256_and_pd(cx, cy))));
  }
  for (; i < n; ++i) count += (x[i] > ux && y[i] > uy) ? 1 : 0;
  return count;
}

std::size_t count_in_rect(const double* x, const double* y, std::size_t n, double x_lo, double x_hi,
                          double y_lo, double y_hi) {
  const __m256d xl = _mm256_set1_pd(x_lo), xh = _mm256_set1_pd(x_hi);
  const __m256d yl = _mm256_set1_pd(y_lo), yh = _mm256_set1_pd(y_hi);
  std::size_t count = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vx = _mm256_loadu_pd(x + i);
    const __m256d vy = _mm256_loadu_pd(y + i);
    __m256d m = _mm256_and_pd(_mm256_cmp_pd(vx, xl, _CMP_GT_OQ), _mm256_cmp_pd(vx, xh, _CMP_LT_OQ));
    m = _mm256_and_pd(m, _mm256_cmp_pd(vy, yl, _CMP_GT_OQ));
    m = _mm256_and_pd(m, _mm256_cmp_pd(vy, yh, _CMP_LT_OQ));
    count += static_cast<std::size_t>(__builtin_popcount(_mm256_movemask_pd(m)));
  }
  for (; i < n; ++i) count += (x[i] > x_lo && x[i] < x_hi && y[i] > y_lo && y[i] < y_hi) ? 1 : 0;
  return count;
}

void to_radial_angular(const double* x, const double* y, std::size_t n, double* r, double* w) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vx = _mm256_loadu_pd(x + i);
    const __m256d s = _mm256_add_pd(vx, _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(r + i, s);
    _mm256_storeu_pd(w + i, _mm256_div_pd(vx, s));
  }
  for (; i < n; ++i) {
    const double s = x[i] + y[i];
    r[i] = s;
    w[i] = x[i] / s;
  }
}

}  // namespace geomdep::kernels::avx2
