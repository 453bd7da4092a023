#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace geomdep {

enum class GaugeFamily {
  Logistic,
  Gaussian,
  InvertedLogistic,
  Rectangular,
  MaxMin,
  AdditiveMix,
  StochasticMix,
  Minimum,
};

std::string to_string(GaugeFamily family);

using NamedParams = std::vector<std::pair<std::string, double>>;

// Order-1 homogeneous, nonnegative function on the positive quadrant.
class Gauge {
 public:
  virtual ~Gauge() = default;

  virtual double eval(double x, double y) const = 0;
  virtual GaugeFamily family() const = 0;
  virtual NamedParams params() const = 0;

  // out[i] = g(w[i], 1 - w[i])
  virtual void eval_angular(const double* w, std::size_t n, double* out) const;

  // One-sided derivative of t -> g(x + t dx, y + t dy) at t = 0+, when known in
  // closed form. Callers fall back to finite differences otherwise.
  virtual std::optional<double> directional_derivative(double x, double y, double dx, double dy) const;

  double operator()(double x, double y) const { return eval(x, y); }
};

using GaugePtr = std::shared_ptr<const Gauge>;

// Plain formula evaluations; parameters are validated.
double eval_logistic(double x, double y, double gamma);
double eval_gaussian(double x, double y, double rho);
double eval_inverted_logistic(double x, double y, double theta);
double eval_rectangular(double x, double y, double theta);
// For theta >= 1 this is max + (1 - 1/theta) min, see README.
double eval_maxmin(double x, double y, double theta);

GaugePtr make_logistic(double gamma);
GaugePtr make_gaussian(double rho);
GaugePtr make_inverted_logistic(double theta);
GaugePtr make_rectangular(double theta);
GaugePtr make_maxmin(double theta);
// Pointwise minimum of two gauges: the gauge of the union of the limit sets.
GaugePtr make_minimum(GaugePtr first, GaugePtr second);

struct BoundaryFunctions {
  std::vector<double> grid;
  std::vector<double> k;        // g(1, q)
  std::vector<double> k_tilde;  // g(q, 1)
  std::function<double(double)> k_fn;
  std::function<double(double)> k_tilde_fn;
  // Analytic one-sided derivatives (side < 0 is the left one); empty when the
  // gauge has no closed form.
  std::function<std::optional<double>(double, int)> dk_fn;
  std::function<std::optional<double>(double, int)> dk_tilde_fn;
};

std::vector<double> default_q_grid(double q_max = 5.0, double step = 1e-3);
BoundaryFunctions boundary_profile(GaugePtr g, const std::vector<double>& grid);

// Three-point one-sided difference; side < 0 is the left derivative.
double one_sided_derivative(const std::function<double(double)>& f, double q, int side, double h = 1e-5);

// Directional derivatives of max(x, y) and min(x, y), one-sided at ties.
double max_direction(double x, double y, double dx, double dy);
double min_direction(double x, double y, double dx, double dy);

struct LevelSetPoint {
  double w, x, y;
};
std::vector<LevelSetPoint> unit_level_set(const Gauge& g, std::size_t n_points = 1001);

struct MinimumResult {
  double argmin;
  double value;
};

// Coarse grid search, then Brent refinement inside the bracketing cell. Ties on
// the grid resolve to the largest minimizer.
MinimumResult minimize_on_interval(const std::function<double(double)>& f, double lo, double hi,
                                   std::size_t n_grid = 2001);

}  // namespace geomdep
