#pragma once

#include <cstddef>
#include <vector>

namespace geomdep {

// Structure-of-arrays point cloud on exponential margins.
struct PointCloud {
  std::vector<double> x;
  std::vector<double> y;
  std::size_t size() const { return x.size(); }
};

struct AngularRadialSample {
  std::vector<double> r;  // x + y
  std::vector<double> w;  // x / (x + y)
  std::size_t size() const { return r.size(); }
};

AngularRadialSample to_angular(const PointCloud& points);
PointCloud to_cartesian(const AngularRadialSample& sample);

class ThresholdFunction {
 public:
  ThresholdFunction() = default;
  ThresholdFunction(std::vector<double> knots, std::vector<double> values);

  // Piecewise linear between knots, flat beyond the first and last knot.
  double operator()(double w) const;
  void eval(const double* w, std::size_t n, double* out) const;

  const std::vector<double>& knots() const { return knots_; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> knots_;
  std::vector<double> values_;
};

struct ThresholdOptions {
  std::size_t n_windows = 17;
  double overlap = 0.5;
  std::size_t min_per_window = 30;
  // A window with fewer points borrows the min_per_window angles nearest its
  // center. When false such a window raises InsufficientData.
  bool widen_sparse = true;
};

// Type-7 sample quantile (linear interpolation between order statistics).
double quantile_type7(std::vector<double> values, double p);

ThresholdFunction rolling_quantile_threshold(const AngularRadialSample& sample, double tau,
                                             const ThresholdOptions& options = {});

}  // namespace geomdep
