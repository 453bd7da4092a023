#include "geomdep/gauge.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <limits>
#include <sstream>

#include "geomdep/errors.hpp"
#include "geomdep/kernels.hpp"

namespace geomdep {

namespace {

void check_point(double x, double y) {
  if (!(x >= 0.0) || !(y >= 0.0) || !std::isfinite(x) || !std::isfinite(y))
    throw DomainError("gauge arguments must be finite and nonnegative");
}

std::string fmt_param(const char* name, double v) {
  std::ostringstream os;
  os << name << " = " << v;
  return os.str();
}

// Ties between the pieces of a piecewise gauge, up to rounding.
bool nearly_equal(double a, double b) { return std::fabs(a - b) <= 1e-13 * std::max({1.0, std::fabs(a), std::fabs(b)}); }

void require(bool ok, const char* family, const char* name, double v, const char* range) {
  if (!ok) throw DomainError(std::string(family) + ": " + fmt_param(name, v) + " outside " + range);
}

class LogisticGauge final : public Gauge {
 public:
  explicit LogisticGauge(double gamma) : gamma_(gamma) {
    require(gamma > 0.0 && gamma < 1.0, "logistic", "gamma", gamma, "(0,1)");
  }
  double eval(double x, double y) const override { return eval_logistic(x, y, gamma_); }
  GaugeFamily family() const override { return GaugeFamily::Logistic; }
  NamedParams params() const override { return {{"gamma", gamma_}}; }
  void eval_angular(const double* w, std::size_t n, double* out) const override {
    kernels::maxmin_angular(w, n, 1.0 / gamma_, 1.0 - 1.0 / gamma_, out);
  }
  std::optional<double> directional_derivative(double x, double y, double dx, double dy) const override {
    return max_direction(x, y, dx, dy) / gamma_ + (1.0 - 1.0 / gamma_) * min_direction(x, y, dx, dy);
  }

 private:
  double gamma_;
};

class GaussianGauge final : public Gauge {
 public:
  explicit GaussianGauge(double rho) : rho_(rho) { require(rho >= 0.0 && rho < 1.0, "gaussian", "rho", rho, "[0,1)"); }
  double eval(double x, double y) const override { return eval_gaussian(x, y, rho_); }
  GaugeFamily family() const override { return GaugeFamily::Gaussian; }
  NamedParams params() const override { return {{"rho", rho_}}; }
  std::optional<double> directional_derivative(double x, double y, double dx, double dy) const override {
    if (rho_ == 0.0) return dx + dy;
    // sqrt(x y) is not differentiable on the axes.
    if (!(x > 0.0 && y > 0.0)) return std::nullopt;
    const double s = std::sqrt(y / x);
    return ((1.0 - rho_ * s) * dx + (1.0 - rho_ / s) * dy) / (1.0 - rho_ * rho_);
  }

 private:
  double rho_;
};

class InvertedLogisticGauge final : public Gauge {
 public:
  explicit InvertedLogisticGauge(double theta) : theta_(theta) {
    require(theta > 0.0 && theta <= 1.0, "inverted logistic", "theta", theta, "(0,1]");
  }
  double eval(double x, double y) const override { return eval_inverted_logistic(x, y, theta_); }
  GaugeFamily family() const override { return GaugeFamily::InvertedLogistic; }
  NamedParams params() const override { return {{"theta", theta_}}; }
  std::optional<double> directional_derivative(double x, double y, double dx, double dy) const override {
    const double g = eval(x, y);
    if (!(g > 0.0)) return std::nullopt;
    const double e = 1.0 / theta_ - 1.0;
    return std::pow(x / g, e) * dx + std::pow(y / g, e) * dy;
  }

 private:
  double theta_;
};

class RectangularGauge final : public Gauge {
 public:
  explicit RectangularGauge(double theta) : theta_(theta) {
    require(theta > 0.0 && theta <= 1.0, "rectangular", "theta", theta, "(0,1]");
  }
  double eval(double x, double y) const override { return eval_rectangular(x, y, theta_); }
  GaugeFamily family() const override { return GaugeFamily::Rectangular; }
  NamedParams params() const override { return {{"theta", theta_}}; }
  std::optional<double> directional_derivative(double x, double y, double dx, double dy) const override {
    const double diff = std::fabs(x - y) / theta_;
    const double sum = (x + y) / (2.0 - theta_);
    const double d_diff = (max_direction(x, y, dx, dy) - min_direction(x, y, dx, dy)) / theta_;
    const double d_sum = (dx + dy) / (2.0 - theta_);
    if (nearly_equal(diff, sum)) return std::max(d_diff, d_sum);
    return diff > sum ? d_diff : d_sum;
  }

 private:
  double theta_;
};

class MaxMinGauge final : public Gauge {
 public:
  explicit MaxMinGauge(double theta) : theta_(theta) {
    require(theta > 0.0 && std::isfinite(theta), "max-min", "theta", theta, "(0,inf)");
    if (theta < 1.0) {
      a_ = 1.0 / theta;
      b_ = 1.0 - 1.0 / theta;
    } else {
      a_ = 1.0;
      b_ = 1.0 - 1.0 / theta;
    }
  }
  double eval(double x, double y) const override {
    check_point(x, y);
    return a_ * std::max(x, y) + b_ * std::min(x, y);
  }
  GaugeFamily family() const override { return GaugeFamily::MaxMin; }
  NamedParams params() const override { return {{"theta", theta_}}; }
  void eval_angular(const double* w, std::size_t n, double* out) const override {
    kernels::maxmin_angular(w, n, a_, b_, out);
  }
  std::optional<double> directional_derivative(double x, double y, double dx, double dy) const override {
    return a_ * max_direction(x, y, dx, dy) + b_ * min_direction(x, y, dx, dy);
  }

 private:
  double theta_;
  double a_ = 1.0;
  double b_ = 0.0;
};

class MinimumGauge final : public Gauge {
 public:
  MinimumGauge(GaugePtr first, GaugePtr second) : first_(std::move(first)), second_(std::move(second)) {
    if (!first_ || !second_) throw DomainError("minimum gauge needs two components");
  }
  double eval(double x, double y) const override { return std::min(first_->eval(x, y), second_->eval(x, y)); }
  std::optional<double> directional_derivative(double x, double y, double dx, double dy) const override {
    const double a = first_->eval(x, y);
    const double b = second_->eval(x, y);
    if (!nearly_equal(a, b)) return (a < b ? first_ : second_)->directional_derivative(x, y, dx, dy);
    const auto da = first_->directional_derivative(x, y, dx, dy);
    const auto db = second_->directional_derivative(x, y, dx, dy);
    if (!da || !db) return std::nullopt;
    return std::min(*da, *db);
  }
  GaugeFamily family() const override { return GaugeFamily::Minimum; }
  NamedParams params() const override {
    NamedParams out;
    for (const auto& [k, v] : first_->params()) out.emplace_back("first." + k, v);
    for (const auto& [k, v] : second_->params()) out.emplace_back("second." + k, v);
    return out;
  }

 private:
  GaugePtr first_;
  GaugePtr second_;
};

}  // namespace

std::string to_string(GaugeFamily family) {
  switch (family) {
    case GaugeFamily::Logistic: return "logistic";
    case GaugeFamily::Gaussian: return "gaussian";
    case GaugeFamily::InvertedLogistic: return "inverted_logistic";
    case GaugeFamily::Rectangular: return "rectangular";
    case GaugeFamily::MaxMin: return "maxmin";
    case GaugeFamily::AdditiveMix: return "additive_mix";
    case GaugeFamily::StochasticMix: return "stochastic_mix";
    case GaugeFamily::Minimum: return "minimum";
  }
  return "unknown";
}

void Gauge::eval_angular(const double* w, std::size_t n, double* out) const {
  for (std::size_t i = 0; i < n; ++i) out[i] = eval(w[i], 1.0 - w[i]);
}

std::optional<double> Gauge::directional_derivative(double, double, double, double) const { return std::nullopt; }

double max_direction(double x, double y, double dx, double dy) {
  if (x == y) return std::max(dx, dy);
  return x > y ? dx : dy;
}

double min_direction(double x, double y, double dx, double dy) {
  if (x == y) return std::min(dx, dy);
  return x < y ? dx : dy;
}

double eval_logistic(double x, double y, double gamma) {
  require(gamma > 0.0 && gamma < 1.0, "logistic", "gamma", gamma, "(0,1)");
  check_point(x, y);
  return (x + y) / gamma + (1.0 - 2.0 / gamma) * std::min(x, y);
}

double eval_gaussian(double x, double y, double rho) {
  require(rho >= 0.0 && rho < 1.0, "gaussian", "rho", rho, "[0,1)");
  check_point(x, y);
  const double v = (x + y - 2.0 * rho * std::sqrt(x * y)) / (1.0 - rho * rho);
  return std::max(v, 0.0);
}

double eval_inverted_logistic(double x, double y, double theta) {
  require(theta > 0.0 && theta <= 1.0, "inverted logistic", "theta", theta, "(0,1]");
  check_point(x, y);
  if (x == 0.0) return y;
  if (y == 0.0) return x;
  // theta * logsumexp(ln x / theta, ln y / theta)
  const double a = std::log(x) / theta;
  const double b = std::log(y) / theta;
  const double m = std::max(a, b);
  return std::exp(theta * (m + std::log1p(std::exp(std::min(a, b) - m))));
}

double eval_rectangular(double x, double y, double theta) {
  require(theta > 0.0 && theta <= 1.0, "rectangular", "theta", theta, "(0,1]");
  check_point(x, y);
  return std::max(std::fabs(x - y) / theta, (x + y) / (2.0 - theta));
}

double eval_maxmin(double x, double y, double theta) {
  require(theta > 0.0 && std::isfinite(theta), "max-min", "theta", theta, "(0,inf)");
  check_point(x, y);
  if (theta < 1.0) return std::max(x, y) / theta + (1.0 - 1.0 / theta) * std::min(x, y);
  return std::max(x, y) + (1.0 - 1.0 / theta) * std::min(x, y);
}

GaugePtr make_logistic(double gamma) { return std::make_shared<LogisticGauge>(gamma); }
GaugePtr make_gaussian(double rho) { return std::make_shared<GaussianGauge>(rho); }
GaugePtr make_inverted_logistic(double theta) { return std::make_shared<InvertedLogisticGauge>(theta); }
GaugePtr make_rectangular(double theta) { return std::make_shared<RectangularGauge>(theta); }
GaugePtr make_maxmin(double theta) { return std::make_shared<MaxMinGauge>(theta); }
GaugePtr make_minimum(GaugePtr first, GaugePtr second) {
  return std::make_shared<MinimumGauge>(std::move(first), std::move(second));
}

std::vector<double> default_q_grid(double q_max, double step) {
  if (!(q_max >= 1.0) || !(step > 0.0)) throw DomainError("q grid needs q_max >= 1 and a positive step");
  const auto n = static_cast<std::size_t>(std::llround(q_max / step));
  std::vector<double> grid(n + 1);
  for (std::size_t i = 0; i <= n; ++i) grid[i] = static_cast<double>(i) * step;
  return grid;
}

BoundaryFunctions boundary_profile(GaugePtr g, const std::vector<double>& grid) {
  if (!g) throw DomainError("boundary_profile: null gauge");
  if (grid.empty() || grid.front() < 0.0) throw DomainError("boundary_profile: grid must start at q >= 0");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw DomainError("boundary_profile: grid must be strictly increasing");
  if (grid.back() < 1.0) throw DomainError("boundary_profile: grid must reach q = 1");
  BoundaryFunctions out;
  out.grid = grid;
  out.k.resize(grid.size());
  out.k_tilde.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out.k[i] = g->eval(1.0, grid[i]);
    out.k_tilde[i] = g->eval(grid[i], 1.0);
  }
  out.k_fn = [g](double q) { return g->eval(1.0, q); };
  out.k_tilde_fn = [g](double q) { return g->eval(q, 1.0); };
  if (g->directional_derivative(1.0, 0.5, 0.0, 1.0)) {
    out.dk_fn = [g](double q, int side) -> std::optional<double> {
      if (side >= 0) return g->directional_derivative(1.0, q, 0.0, 1.0);
      const auto d = g->directional_derivative(1.0, q, 0.0, -1.0);
      return d ? std::optional<double>(-*d) : std::nullopt;
    };
    out.dk_tilde_fn = [g](double q, int side) -> std::optional<double> {
      if (side >= 0) return g->directional_derivative(q, 1.0, 1.0, 0.0);
      const auto d = g->directional_derivative(q, 1.0, -1.0, 0.0);
      return d ? std::optional<double>(-*d) : std::nullopt;
    };
  }
  return out;
}

double one_sided_derivative(const std::function<double(double)>& f, double q, int side, double h) {
  if (side >= 0) return (-3.0 * f(q) + 4.0 * f(q + h) - f(q + 2.0 * h)) / (2.0 * h);
  return (3.0 * f(q) - 4.0 * f(q - h) + f(q - 2.0 * h)) / (2.0 * h);
}

std::vector<LevelSetPoint> unit_level_set(const Gauge& g, std::size_t n_points) {
  if (n_points < 2) throw DomainError("level set needs at least two points");
  std::vector<LevelSetPoint> out;
  out.reserve(n_points);
  for (std::size_t i = 0; i < n_points; ++i) {
    const double w = static_cast<double>(i) / static_cast<double>(n_points - 1);
    const double v = g.eval(w, 1.0 - w);
    out.push_back({w, w / v, (1.0 - w) / v});
  }
  return out;
}

MinimumResult minimize_on_interval(const std::function<double(double)>& f, double lo, double hi, std::size_t n_grid) {
  if (!(hi > lo) || n_grid < 3) throw DomainError("minimize_on_interval: bad interval or grid");
  std::vector<double> values(n_grid);
  const double step = (hi - lo) / static_cast<double>(n_grid - 1);
  auto node = [&](std::size_t i) { return i + 1 == n_grid ? hi : lo + static_cast<double>(i) * step; };
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n_grid; ++i) {
    values[i] = f(node(i));
    best = std::min(best, values[i]);
  }
  const double tie = 1e-13 * std::max(1.0, std::fabs(best));
  std::size_t idx = 0;
  for (std::size_t i = 0; i < n_grid; ++i)
    if (values[i] <= best + tie) idx = i;

  const double a = node(idx == 0 ? 0 : idx - 1);
  const double b = node(std::min(idx + 1, n_grid - 1));
  MinimumResult result{node(idx), values[idx]};
  const auto refined = boost::math::tools::brent_find_minima(f, a, b, 50);
  if (refined.second < result.value - tie) result = {refined.first, refined.second};
  return result;
}

}  // namespace geomdep
