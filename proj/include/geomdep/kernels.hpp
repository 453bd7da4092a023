#pragma once

#include <cstddef>

namespace geomdep::kernels {

enum class SimdLevel { Scalar, Avx2 };

// Level used by the dispatching entry points below. Detected once from the
// CPU; force_level() pins it (tests use this to compare the two paths).
SimdLevel active_level();
bool avx2_available();
void force_level(SimdLevel level);
void reset_level();
const char* level_name(SimdLevel level);

// out[i] = a * max(w[i], 1 - w[i]) + b * min(w[i], 1 - w[i])
void maxmin_angular(const double* w, std::size_t n, double a, double b, double* out);
double dot(const double* x, const double* y, std::size_t n);
// #{i : x[i] > ux and y[i] > uy}
std::size_t count_joint_exceed(const double* x, const double* y, std::size_t n, double ux, double uy);
// #{i : x_lo < x[i] < x_hi and y_lo < y[i] < y_hi}
std::size_t count_in_rect(const double* x, const double* y, std::size_t n, double x_lo, double x_hi,
                          double y_lo, double y_hi);
// r = x + y, w = x / r
void to_radial_angular(const double* x, const double* y, std::size_t n, double* r, double* w);

namespace scalar {
void maxmin_angular(const double* w, std::size_t n, double a, double b, double* out);
double dot(const double* x, const double* y, std::size_t n);
std::size_t count_joint_exceed(const double* x, const double* y, std::size_t n, double ux, double uy);
std::size_t count_in_rect(const double* x, const double* y, std::size_t n, double x_lo, double x_hi,
                          double y_lo, double y_hi);
void to_radial_angular(const double* x, const double* y, std::size_t n, double* r, double* w);
}  // namespace scalar

namespace avx2 {
void maxmin_angular(const double* w, std::size_t n, double a, double b, double* out);
double dot(const double* x, const double* y, std::size_t n);
std::size_t count_joint_exceed(const double* x, const double* y, std::size_t n, double ux, double uy);
std::size_t count_in_rect(const double* x, const double* y, std::size_t n, double x_lo, double x_hi,
                          double y_lo, double y_hi);
void to_radial_angular(const double* x, const double* y, std::size_t n, double* r, double* w);
}  // namespace avx2

}  // namespace geomdep::kernels
