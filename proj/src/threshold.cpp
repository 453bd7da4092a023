#include "geomdep/threshold.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "geomdep/errors.hpp"
#include "geomdep/kernels.hpp"

namespace geomdep {

AngularRadialSample to_angular(const PointCloud& points) {
  if (points.x.size() != points.y.size()) throw DomainError("to_angular: x and y lengths differ");
  const std::size_t n = points.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double x = points.x[i], y = points.y[i];
    if (!(x >= 0.0) || !(y >= 0.0) || !std::isfinite(x) || !std::isfinite(y))
      throw DomainError("to_angular: coordinates must be finite and nonnegative");
    if (x == 0.0 && y == 0.0) throw DomainError("to_angular: point at the origin");
  }
  AngularRadialSample out;
  out.r.resize(n);
  out.w.resize(n);
  kernels::to_radial_angular(points.x.data(), points.y.data(), n, out.r.data(), out.w.data());
  return out;
}

PointCloud to_cartesian(const AngularRadialSample& sample) {
  PointCloud out;
  out.x.resize(sample.size());
  out.y.resize(sample.size());
  for (std::size_t i = 0; i < sample.size(); ++i) {
    out.x[i] = sample.r[i] * sample.w[i];
    out.y[i] = sample.r[i] * (1.0 - sample.w[i]);
  }
  return out;
}

ThresholdFunction::ThresholdFunction(std::vector<double> knots, std::vector<double> values)
    : knots_(std::move(knots)), values_(std::move(values)) {
  if (knots_.empty() || knots_.size() != values_.size()) throw DomainError("threshold needs matching knots and values");
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    if (!(values_[i] > 0.0) || !std::isfinite(values_[i])) throw DomainError("threshold values must be positive");
    if (i > 0 && !(knots_[i] > knots_[i - 1])) throw DomainError("threshold knots must be increasing");
  }
}

double ThresholdFunction::operator()(double w) const {
  if (knots_.empty()) throw DomainError("empty threshold function");
  if (w <= knots_.front()) return values_.front();
  if (w >= knots_.back()) return values_.back();
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), w);
  const std::size_t j = static_cast<std::size_t>(it - knots_.begin());
  const double t = (w - knots_[j - 1]) / (knots_[j] - knots_[j - 1]);
  return values_[j - 1] + t * (values_[j] - values_[j - 1]);
}

void ThresholdFunction::eval(const double* w, std::size_t n, double* out) const {
  for (std::size_t i = 0; i < n; ++i) out[i] = (*this)(w[i]);
}

double quantile_type7(std::vector<double> values, double p) {
  if (values.empty()) throw InsufficientData("quantile of an empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("quantile level must lie in [0,1]");
  const double h = (static_cast<double>(values.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(lo), values.end());
  const double a = values[lo];
  if (lo + 1 >= values.size()) return a;
  const double b = *std::min_element(values.begin() + static_cast<std::ptrdiff_t>(lo) + 1, values.end());
  return a + (h - static_cast<double>(lo)) * (b - a);
}

ThresholdFunction rolling_quantile_threshold(const AngularRadialSample& sample, double tau,
                                             const ThresholdOptions& options) {
  if (!(tau > 0.5 && tau < 1.0)) throw DomainError("tau must lie in (0.5, 1)");
  if (options.n_windows < 3) throw DomainError("need at least three windows");
  if (!(options.overlap >= 0.0 && options.overlap < 1.0)) throw DomainError("overlap must lie in [0,1)");
  const std::size_t m = options.n_windows;
  const double width = 1.0 / (1.0 + static_cast<double>(m - 1) * (1.0 - options.overlap));
  const double step = width * (1.0 - options.overlap);

  std::vector<double> centers(m), quantiles(m);
  std::vector<double> bucket;
  for (std::size_t j = 0; j < m; ++j) {
    const double lo = static_cast<double>(j) * step;
    const double hi = (j + 1 == m) ? 1.0 : lo + width;
    centers[j] = 0.5 * (lo + hi);
    bucket.clear();
    for (std::size_t i = 0; i < sample.size(); ++i)
      if (sample.w[i] >= lo && sample.w[i] <= hi) bucket.push_back(sample.r[i]);
    if (bucket.size() < options.min_per_window && options.widen_sparse && sample.size() >= options.min_per_window) {
      // Strong dependence empties the edge windows; use the nearest angles instead.
      std::vector<std::pair<double, double>> by_distance(sample.size());
      for (std::size_t i = 0; i < sample.size(); ++i) by_distance[i] = {std::fabs(sample.w[i] - centers[j]), sample.r[i]};
      const auto cut = by_distance.begin() + static_cast<std::ptrdiff_t>(options.min_per_window);
      std::nth_element(by_distance.begin(), cut - 1, by_distance.end());
      bucket.clear();
      for (auto it = by_distance.begin(); it != cut; ++it) bucket.push_back(it->second);
    }
    if (bucket.size() < options.min_per_window)
      throw InsufficientData("threshold window " + std::to_string(j) + " holds " + std::to_string(bucket.size()) +
                             " points, fewer than " + std::to_string(options.min_per_window));
    quantiles[j] = quantile_type7(bucket, tau);
  }
  // Each knot takes the mean of the quantiles from every window covering its center.
  std::vector<double> values(m);
  const double reach = 0.5 * width + 1e-12;
  for (std::size_t j = 0; j < m; ++j) {
    double sum = 0.0;
    int count = 0;
    for (std::size_t k = 0; k < m; ++k) {
      if (std::fabs(centers[k] - centers[j]) <= reach) {
        sum += quantiles[k];
        ++count;
      }
    }
    values[j] = sum / count;
  }
  return ThresholdFunction(centers, values);
}

}  // namespace geomdep
