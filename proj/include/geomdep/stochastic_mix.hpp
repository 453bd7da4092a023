#pragma once

#include <memory>

#include "geomdep/gauge.hpp"

namespace geomdep {

enum class StochasticBase { Gaussian, InvertedLogistic, Rectangular };

// Gauge of Y = gamma * S * (1,1) + V, with V drawn from the base family.
struct StochasticMixSpec {
  StochasticBase base = StochasticBase::Gaussian;
  double param = 0.5;  // rho or theta of the base gauge
  double gamma = 0.9;
};

// Tangent point on the y > x branch of {g_V = 1} for the line through (gamma, gamma).
struct TangentPoint {
  double x0;
  double y0;
  double m;  // slope (gamma - y0) / (gamma - x0)
};

TangentPoint tangent_point_gaussian(double rho, double gamma);
TangentPoint tangent_point_invlogistic(double theta, double gamma);
TangentPoint tangent_point_rectangular(double theta, double gamma);

// 1 / g_V(1, 1)
double base_eta(const StochasticMixSpec& spec);

class StochasticMixGauge final : public Gauge {
 public:
  explicit StochasticMixGauge(const StochasticMixSpec& spec);

  double eval(double x, double y) const override;
  GaugeFamily family() const override { return GaugeFamily::StochasticMix; }
  NamedParams params() const override;

  const StochasticMixSpec& spec() const { return spec_; }
  // False when gamma <= 1/g_V(1,1) and the gauge is g_V itself.
  bool has_tangent() const { return has_tangent_; }
  const TangentPoint& tangent() const { return tangent_; }
  double base_value(double x, double y) const { return base_->eval(x, y); }
  // Minimizer of s + g_V(x - gamma s, y - gamma s) over [0, min(x,y)/gamma].
  double s_hat(double x, double y) const;

 private:
  double inner(double x, double y) const;

  StochasticMixSpec spec_;
  GaugePtr base_;
  bool has_tangent_ = false;
  TangentPoint tangent_{0.0, 1.0, 0.0};
  double ratio_ = 0.0;  // x0 / (x0 + y0)
};

std::shared_ptr<const StochasticMixGauge> make_stochastic_mix(const StochasticMixSpec& spec);

double eval_stochastic_gauge(const StochasticMixSpec& spec, double x, double y);
double minimizer_s_hat(const StochasticMixSpec& spec, double x, double y);
// Closed quadratic-root form of s_hat for the Gaussian base (inner region).
double s_hat_gaussian_quadratic(double rho, double gamma, double x, double y);
double eta_of(const StochasticMixSpec& spec);

}  // namespace geomdep
