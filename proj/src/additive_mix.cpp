#include "geomdep/additive_mix.hpp"

#include <algorithm>
#include <cmath>

#include "geomdep/errors.hpp"

namespace geomdep {

namespace {

void check_common(double p, double gamma) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("mixture weight p must lie in (0,1)");
  if (!(gamma > 0.0 && gamma < 1.0)) throw DomainError("logistic component gamma must lie in (0,1)");
}

// Independence first component: k~*(z) is linear with slope p - (1-p)(1/gamma - 1).
double kappa_independence(double p, double gamma) { return gamma >= 1.0 - p ? 0.0 : 1.0; }

GaugePtr make_first(const MixtureSpec& spec) {
  switch (spec.first) {
    case MixtureFirst::Gaussian: return make_gaussian(spec.param);
    case MixtureFirst::InvertedLogistic: return make_inverted_logistic(spec.param);
    case MixtureFirst::Rectangular: return make_rectangular(spec.param);
  }
  throw DomainError("unknown mixture component");
}

class RawMixture final : public Gauge {
 public:
  explicit RawMixture(const MixtureSpec& spec) : spec_(spec), first_(make_first(spec)) {
    check_common(spec.p, spec.gamma);
  }
  double eval(double x, double y) const override {
    return spec_.p * first_->eval(x, y) + (1.0 - spec_.p) * eval_logistic(x, y, spec_.gamma);
  }
  GaugeFamily family() const override { return GaugeFamily::AdditiveMix; }
  NamedParams params() const override { return {{"p", spec_.p}, {"first", spec_.param}, {"gamma", spec_.gamma}}; }

 private:
  MixtureSpec spec_;
  GaugePtr first_;
};

}  // namespace

double kappa_gauss_logistic(double p, double rho, double gamma) {
  check_common(p, gamma);
  if (!(rho >= 0.0 && rho < 1.0)) throw DomainError("rho must lie in [0,1)");
  if (rho == 0.0) return kappa_independence(p, gamma);
  const double c = ((1.0 - p) / p) * ((1.0 - gamma) / gamma);
  if ((1.0 + rho) * c < 1.0) {
    const double k = (1.0 - rho * rho) * c;
    return rho * rho / ((1.0 - k) * (1.0 - k));
  }
  // Covers 1 - rho <= K < 1 and also K >= 1, where the derivative of k~* is
  // negative on all of [0,1].
  return 1.0;
}

double kappa_invlog_logistic(double p, double theta, double gamma) {
  check_common(p, gamma);
  if (!(theta > 0.0 && theta <= 1.0)) throw DomainError("theta must lie in (0,1]");
  if (theta == 1.0) return kappa_independence(p, gamma);
  const double c = ((1.0 - p) / p) * (1.0 / gamma - 1.0);
  if (c < std::pow(2.0, theta - 1.0)) return std::pow(std::pow(c, 1.0 / (theta - 1.0)) - 1.0, -theta);
  return 1.0;
}

double kappa_rect_logistic(double p, double theta, double gamma) {
  check_common(p, gamma);
  if (!(theta > 0.0 && theta <= 1.0)) throw DomainError("theta must lie in (0,1]");
  if (theta == 1.0) return kappa_independence(p, gamma);
  if (p / (2.0 - theta) + (1.0 - p) * (1.0 - 1.0 / gamma) > 0.0) return 1.0 - theta;
  return 1.0;
}

double kappa_closed_form(const MixtureSpec& spec) {
  switch (spec.first) {
    case MixtureFirst::Gaussian: return kappa_gauss_logistic(spec.p, spec.param, spec.gamma);
    case MixtureFirst::InvertedLogistic: return kappa_invlog_logistic(spec.p, spec.param, spec.gamma);
    case MixtureFirst::Rectangular: return kappa_rect_logistic(spec.p, spec.param, spec.gamma);
  }
  throw DomainError("unknown mixture component");
}

GaugePtr make_raw_mixture(const MixtureSpec& spec) { return std::make_shared<RawMixture>(spec); }

SupremumResult numeric_supremum(const Gauge& gstar) {
  const auto best = minimize_on_interval([&](double z) { return gstar.eval(z, 1.0); }, 0.0, 1.0, 2001);
  return {best.argmin, best.value};
}

RescaledMixture::RescaledMixture(const MixtureSpec& spec)
    : spec_(spec), first_(make_first(spec)), inv_gamma_(0.0), kappa_(0.0), scale_(1.0) {
  check_common(spec.p, spec.gamma);
  inv_gamma_ = 1.0 / spec.gamma;
  kappa_ = kappa_closed_form(spec);
  scale_ = raw(kappa_, 1.0);
}

double RescaledMixture::raw(double x, double y) const {
  const double logistic = (x + y) * inv_gamma_ + (1.0 - 2.0 * inv_gamma_) * std::min(x, y);
  return spec_.p * first_->eval(x, y) + (1.0 - spec_.p) * logistic;
}

double RescaledMixture::eval(double x, double y) const { return raw(x, y) / scale_; }

std::optional<double> RescaledMixture::directional_derivative(double x, double y, double dx, double dy) const {
  const auto d_first = first_->directional_derivative(x, y, dx, dy);
  if (!d_first) return std::nullopt;
  const double d_log = (dx + dy) * inv_gamma_ + (1.0 - 2.0 * inv_gamma_) * min_direction(x, y, dx, dy);
  return (spec_.p * *d_first + (1.0 - spec_.p) * d_log) / scale_;
}

NamedParams RescaledMixture::params() const {
  const char* name = spec_.first == MixtureFirst::Gaussian ? "rho" : "theta";
  return {{"p", spec_.p}, {name, spec_.param}, {"gamma", spec_.gamma}, {"kappa", kappa_}};
}

std::shared_ptr<const RescaledMixture> build_rescaled_mixture(const MixtureSpec& spec) {
  return std::make_shared<RescaledMixture>(spec);
}

}  // namespace geomdep
