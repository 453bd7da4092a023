#pragma once

#include "geomdep/rng.hpp"

namespace geomdep {

struct GammaParams {
  double shape = 1.0;
  double rate = 1.0;
};

double log_gamma(double x);

// Regularized incomplete gamma functions P(a,x) and Q(a,x) = 1 - P(a,x).
double gamma_p(double a, double x);
double gamma_q(double a, double x);
// ln Q(a,x), accurate far into the upper tail where Q underflows.
double log_gamma_q(double a, double x);
double log_gamma_p(double a, double x);

double gamma_survival(double r, const GammaParams& params);
double log_gamma_survival(double r, const GammaParams& params);
double gamma_cdf(double r, const GammaParams& params);

double gamma_quantile(double p, const GammaParams& params);
// r with ln S(r) = log_survival; used for extreme upper quantiles.
double gamma_quantile_upper_log(double log_survival, const GammaParams& params);

// Gamma(shape, rate) conditioned on exceeding lower, sampled in survival space.
double sample_trunc_gamma(RngStream& rng, const GammaParams& params, double lower);

}  // namespace geomdep
