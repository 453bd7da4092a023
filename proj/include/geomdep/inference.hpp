#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "geomdep/gauge.hpp"
#include "geomdep/models.hpp"
#include "geomdep/threshold.hpp"

namespace geomdep {

// Radial exceedances (r_i, w_i) with their thresholds t_i < r_i.
struct Exceedances {
  std::vector<double> r;
  std::vector<double> w;
  std::vector<double> t;
  std::size_t size() const { return r.size(); }
};

// Keeps records with r strictly above the threshold at their angle.
Exceedances make_exceedances(const AngularRadialSample& sample, const ThresholdFunction& threshold);

// Truncated-gamma negative log-likelihood for shape lambda and rate g(w, 1-w).
// Returns +inf when some rate is not positive and finite.
double negloglik(double lambda, const Gauge& g, const Exceedances& exc);
// Natural parameters [lambda, gauge params...]; +inf outside the domain.
double negloglik(ModelKind kind, const std::vector<double>& natural, const Exceedances& exc);

struct OptimizerConfig {
  int max_iterations = 2000;
  double size_tolerance = 1e-8;
  double initial_step = 0.5;
  bool standard_errors = false;
  std::vector<std::vector<double>> starts;  // natural scale; empty means default_starts
};

struct FitResult {
  ModelKind family = ModelKind::MM;
  std::vector<std::string> names;  // "lambda" first
  std::vector<double> estimates;
  double nll = 0.0;
  double aic = 0.0;
  bool converged = false;
  bool at_boundary = false;
  int iterations = 0;
  int starts_converged = 0;
  std::size_t n_exceed = 0;
  std::optional<std::vector<double>> standard_errors;
  std::string message;

  double lambda() const { return estimates.at(0); }
  std::vector<double> gauge_params() const { return {estimates.begin() + 1, estimates.end()}; }
};

FitResult fit(const Exceedances& exc, ModelKind family, const std::optional<std::vector<double>>& init = std::nullopt,
              const OptimizerConfig& config = {});

GaugePtr fitted_gauge(const FitResult& fit);

// Sorted conditional CDF values u_(i) paired with i / (n + 1).
std::vector<std::pair<double, double>> pp_points(const FitResult& fit, const Exceedances& exc);
std::vector<std::pair<double, double>> pp_points(double lambda, const Gauge& g, const Exceedances& exc);

// Kolmogorov-Smirnov distance of a sample from Uniform(0,1).
double ks_uniform_distance(std::vector<double> u);

}  // namespace geomdep
