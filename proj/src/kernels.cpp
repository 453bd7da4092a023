#include "geomdep/kernels.hpp"

#include <atomic>

namespace geomdep::kernels {

namespace {

SimdLevel detect() {
#if defined(GEOMDEP_HAVE_AVX2_KERNELS)
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return SimdLevel::Avx2;
#endif
  return SimdLevel::Scalar;
}

std::atomic<int>& override_slot() {
  static std::atomic<int> slot{-1};
  return slot;
}

}  // namespace

bool avx2_available() {
  static const bool available = detect() == SimdLevel::Avx2;
  return available;
}

SimdLevel active_level() {
  const int forced = override_slot().load(std::memory_order_relaxed);
  if (forced >= 0) return static_cast<SimdLevel>(forced);
  return avx2_available() ? SimdLevel::Avx2 : SimdLevel::Scalar;
}

void force_level(SimdLevel level) {
  if (level == SimdLevel::Avx2 && !avx2_available()) level = SimdLevel::Scalar;
  override_slot().store(static_cast<int>(level), std::memory_order_relaxed);
}

void reset_level() { override_slot().store(-1, std::memory_order_relaxed); }

const char* level_name(SimdLevel level) { return level == SimdLevel::Avx2 ? "avx2" : "scalar"; }

#if defined(GEOMDEP_HAVE_AVX2_KERNELS)
#define GEOMDEP_DISPATCH(call) \
  return active_level() == SimdLevel::Avx2 ? avx2::call : scalar::call
#else
#define GEOMDEP_DISPATCH(call) return scalar::call
#endif

void maxmin_angular(const double* w, std::size_t n, double a, double b, double* out) {
  GEOMDEP_DISPATCH(maxmin_angular(w, n, a, b, out));
}

double dot(const double* x, const double* y, std::size_t n) { GEOMDEP_DISPATCH(dot(x, y, n)); }

std::size_t count_joint_exceed(const double* x, const double* y, std::size_t n, double ux, double uy) {
  GEOMDEP_DISPATCH(count_joint_exceed(x, y, n, ux, uy));
}

std::size_t count_in_rect(const double* x, const double* y, std::size_t n, double x_lo, double x_hi,
                          double y_lo, double y_hi) {
  GEOMDEP_DISPATCH(count_in_rect(x, y, n, x_lo, x_hi, y_lo, y_hi));
}

void to_radial_angular(const double* x, const double* y, std::size_t n, double* r, double* w) {
  GEOMDEP_DISPATCH(to_radial_angular(x, y, n, r, w));
}

#undef GEOMDEP_DISPATCH

}  // namespace geomdep::kernels
