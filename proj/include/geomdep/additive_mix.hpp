#pragma once

#include <memory>

#include "geomdep/gauge.hpp"

namespace geomdep {

enum class MixtureFirst { Gaussian, InvertedLogistic, Rectangular };

// g* = p * g1 + (1 - p) * logistic(gamma); param is rho or theta of g1.
struct MixtureSpec {
  MixtureFirst first = MixtureFirst::Gaussian;
  double param = 0.5;
  double gamma = 0.5;
  double p = 0.5;
};

double kappa_gauss_logistic(double p, double rho, double gamma);
double kappa_invlog_logistic(double p, double theta, double gamma);
double kappa_rect_logistic(double p, double theta, double gamma);
double kappa_closed_form(const MixtureSpec& spec);

// Unnormalized g*, useful as input to numeric_supremum.
GaugePtr make_raw_mixture(const MixtureSpec& spec);

struct SupremumResult {
  double kappa;
  double scale;  // g*(kappa, 1)
};

// Minimizes z -> g*(z, 1) over [0, 1].
SupremumResult numeric_supremum(const Gauge& gstar);

class RescaledMixture final : public Gauge {
 public:
  explicit RescaledMixture(const MixtureSpec& spec);

  double eval(double x, double y) const override;
  GaugeFamily family() const override { return GaugeFamily::AdditiveMix; }
  NamedParams params() const override;
  std::optional<double> directional_derivative(double x, double y, double dx, double dy) const override;

  const MixtureSpec& spec() const { return spec_; }
  double kappa() const { return kappa_; }
  double scale() const { return scale_; }
  double raw(double x, double y) const;

 private:
  MixtureSpec spec_;
  GaugePtr first_;
  double inv_gamma_;
  double kappa_;
  double scale_;
};

std::shared_ptr<const RescaledMixture> build_rescaled_mixture(const MixtureSpec& spec);

}  // namespace geomdep
