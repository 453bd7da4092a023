#include "geomdep/stochastic_mix.hpp"

#include <algorithm>
#include <cmath>

#include "geomdep/errors.hpp"

namespace geomdep {

namespace {

GaugePtr make_base(const StochasticMixSpec& spec) {
  switch (spec.base) {
    case StochasticBase::Gaussian: return make_gaussian(spec.param);
    case StochasticBase::InvertedLogistic: return make_inverted_logistic(spec.param);
    case StochasticBase::Rectangular: return make_rectangular(spec.param);
  }
  throw DomainError("unknown stochastic mixture base");
}

TangentPoint with_slope(double x0, double y0, double gamma) { return {x0, y0, (gamma - y0) / (gamma - x0)}; }

}  // namespace

TangentPoint tangent_point_gaussian(double rho, double gamma) {
  if (!(rho >= 0.0 && rho < 1.0)) throw DomainError("rho must lie in [0,1)");
  if (!(gamma > 0.5 * (1.0 + rho)) || !std::isfinite(gamma))
    throw DomainError("gaussian tangent point needs gamma > (1 + rho)/2");
  const double r2 = rho * rho;
  const double t = 2.0 * gamma - 1.0;
  const double a = t * t;
  const double b = t * (1.0 - r2 - 2.0 * gamma);
  const double c = r2 * gamma * gamma;
  double disc = b * b - 4.0 * a * c;
  if (disc < -1e-12) throw NumericError("gaussian tangent point: negative discriminant");
  disc = std::max(disc, 0.0);
  // b < 0 here, so q > 0 and the smaller root is c / q.
  const double q = 0.5 * (-b + std::sqrt(disc));
  const double x0 = c / q;
  const double y0 = 2.0 * rho * std::sqrt(std::max((1.0 - r2) * (x0 - x0 * x0), 0.0)) - x0 * (1.0 - 2.0 * r2) + (1.0 - r2);
  return with_slope(x0, y0, gamma);
}

TangentPoint tangent_point_invlogistic(double theta, double gamma) {
  if (!(theta > 0.0 && theta < 1.0)) throw DomainError("inverted-logistic tangent point needs theta in (0,1)");
  if (!(gamma > std::pow(2.0, -theta)) || !std::isfinite(gamma))
    throw DomainError("inverted-logistic tangent point needs gamma > 2^-theta");
  if (gamma >= 1.0) return with_slope(0.0, 1.0, gamma);
  const double target = 1.0 / gamma;
  auto f = [&](double z) { return std::pow(1.0 - z, 1.0 - theta) + std::pow(z, 1.0 - theta) - target; };
  double lo = 1e-12;
  double hi = 0.5;
  if (f(lo) >= 0.0) return with_slope(0.0, 1.0, gamma);
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  const double z = 0.5 * (lo + hi);
  return with_slope(std::pow(z, theta), std::pow(1.0 - z, theta), gamma);
}

TangentPoint tangent_point_rectangular(double theta, double gamma) {
  if (!(theta > 0.0 && theta <= 1.0)) throw DomainError("theta must lie in (0,1]");
  if (!(gamma > 1.0 - 0.5 * theta) || !std::isfinite(gamma))
    throw DomainError("rectangular tangent point needs gamma > 1 - theta/2");
  return with_slope(1.0 - theta, 1.0, gamma);
}

double base_eta(const StochasticMixSpec& spec) {
  switch (spec.base) {
    case StochasticBase::Gaussian: return 0.5 * (1.0 + spec.param);
    case StochasticBase::InvertedLogistic: return std::pow(2.0, -spec.param);
    case StochasticBase::Rectangular: return 1.0 - 0.5 * spec.param;
  }
  throw DomainError("unknown stochastic mixture base");
}

StochasticMixGauge::StochasticMixGauge(const StochasticMixSpec& spec) : spec_(spec), base_(make_base(spec)) {
  if (!(spec.gamma > 0.0) || !std::isfinite(spec.gamma)) throw DomainError("mixing strength gamma must be positive");
  if (spec.base == StochasticBase::InvertedLogistic && spec.param == 1.0)
    throw DomainError("inverted-logistic base needs theta < 1");
  has_tangent_ = spec.gamma > base_eta(spec);
  if (!has_tangent_) return;
  switch (spec.base) {
    case StochasticBase::Gaussian: tangent_ = tangent_point_gaussian(spec.param, spec.gamma); break;
    case StochasticBase::InvertedLogistic: tangent_ = tangent_point_invlogistic(spec.param, spec.gamma); break;
    case StochasticBase::Rectangular: tangent_ = tangent_point_rectangular(spec.param, spec.gamma); break;
  }
  ratio_ = tangent_.x0 / (tangent_.x0 + tangent_.y0);
}

// Gauge of the hull of {g_V <= 1} and (gamma, gamma).
double StochasticMixGauge::inner(double x, double y) const {
  if (!has_tangent_) return base_->eval(x, y);
  const double hi = std::max(x, y);
  const double lo = std::min(x, y);
  if (hi == 0.0) return 0.0;
  if (lo / (lo + hi) <= ratio_) return base_->eval(x, y);
  return (hi - tangent_.m * lo) / (spec_.gamma * (1.0 - tangent_.m));
}

double StochasticMixGauge::eval(double x, double y) const {
  if (!(x >= 0.0) || !(y >= 0.0) || !std::isfinite(x) || !std::isfinite(y))
    throw DomainError("gauge arguments must be finite and nonnegative");
  const double g = inner(x, y);
  // For gamma > 1 the hull reaches (gamma, gamma); scaling by gamma restores sup(G) = (1,1).
  return spec_.gamma > 1.0 ? spec_.gamma * g : g;
}

double StochasticMixGauge::s_hat(double x, double y) const {
  if (!has_tangent_) return 0.0;
  const double hi = std::max(x, y);
  const double lo = std::min(x, y);
  if (hi == 0.0 || lo / (lo + hi) <= ratio_) return 0.0;
  const double s = (tangent_.x0 * hi - tangent_.y0 * lo) / (spec_.gamma * (tangent_.x0 - tangent_.y0));
  return std::clamp(s, 0.0, lo / spec_.gamma);
}

NamedParams StochasticMixGauge::params() const {
  const char* name = spec_.base == StochasticBase::Gaussian ? "rho" : "theta";
  return {{name, spec_.param}, {"gamma", spec_.gamma}};
}

std::shared_ptr<const StochasticMixGauge> make_stochastic_mix(const StochasticMixSpec& spec) {
  return std::make_shared<StochasticMixGauge>(spec);
}

double eval_stochastic_gauge(const StochasticMixSpec& spec, double x, double y) {
  return StochasticMixGauge(spec).eval(x, y);
}

double minimizer_s_hat(const StochasticMixSpec& spec, double x, double y) { return StochasticMixGauge(spec).s_hat(x, y); }

double s_hat_gaussian_quadratic(double rho, double gamma, double x, double y) {
  const double c_hat = std::pow(1.0 - rho * rho - 2.0 * gamma, 2);
  const double k = 4.0 * rho * rho * gamma * gamma - c_hat;
  if (!(k < 0.0)) throw DomainError("quadratic s-hat form needs gamma > (1 + rho)/2");
  return (k * (x + y) + std::sqrt(-k * c_hat) * std::fabs(x - y)) / (2.0 * gamma * k);
}

double eta_of(const StochasticMixSpec& spec) {
  const double eta_v = base_eta(spec);
  if (spec.gamma <= eta_v) return eta_v;
  if (spec.gamma <= 1.0) return spec.gamma;
  return 1.0;
}

}  // namespace geomdep
