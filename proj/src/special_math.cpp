#include "geomdep/special_math.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "geomdep/errors.hpp"

namespace geomdep {

namespace {

constexpr double kEps = 1e-15;
constexpr int kMaxTerms = 10000;

void check_shape_arg(double a, double x) {
  if (!std::isfinite(a) || !(a > 0.0)) throw DomainError("incomplete gamma: shape must be positive and finite");
  if (std::isnan(x) || x < 0.0) throw DomainError("incomplete gamma: argument must be nonnegative");
}

// ln of x^a e^-x / Gamma(a)
double log_prefix(double a, double x) { return a * std::log(x) - x - log_gamma(a); }

// Series for P(a,x); valid and fast for x < a + 1. Returns ln P.
double log_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  double ap = a;
  for (int n = 0; n < kMaxTerms; ++n) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * kEps) return log_prefix(a, x) + std::log(sum);
  }
  throw NumericError("incomplete gamma series did not converge");
}

// Continued fraction (modified Lentz) for Q(a,x); valid for x >= a + 1. Returns ln Q.
double log_q_fraction(double a, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxTerms; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEps) return log_prefix(a, x) + std::log(h);
  }
  throw NumericError("incomplete gamma continued fraction did not converge");
}

void check_params(const GammaParams& p) {
  if (!std::isfinite(p.shape) || !(p.shape > 0.0) || !std::isfinite(p.rate) || !(p.rate > 0.0))
    throw DomainError("gamma parameters must be positive and finite");
}

double normal_upper_quantile(double log_tail) {
  const double tail = std::exp(log_tail);
  if (tail > std::numeric_limits<double>::min()) return std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * tail);
  // Mills-ratio asymptotics when the tail probability underflows.
  double z = std::sqrt(-2.0 * log_tail);
  for (int i = 0; i < 4; ++i) z = std::sqrt(-2.0 * (log_tail + std::log(z) + 0.5 * std::log(2.0 * std::numbers::pi)));
  return z;
}

// Solve ln Q(a,x) = target_log_q (upper) or ln P(a,x) = target_log_p (lower) for x.
double solve_standard_quantile(double a, double target_log, bool upper) {
  // Wilson-Hilferty start, with power-law fallbacks in the far tails.
  double z = normal_upper_quantile(target_log);
  if (!upper) z = -z;
  const double c = 1.0 / (9.0 * a);
  const double wh = 1.0 - c + z * std::sqrt(c);
  double x;
  if (wh > 0.0) {
    x = a * wh * wh * wh;
  } else {
    x = std::exp((target_log + log_gamma(a + 1.0)) / a);
  }
  if (!upper) {
    // For small P, P ~ x^a / Gamma(a+1).
    const double small = std::exp((target_log + log_gamma(a + 1.0)) / a);
    if (target_log < -5.0 || !(x > 0.0)) x = small;
  }
  if (!(x > 0.0) || !std::isfinite(x)) x = a;

  auto objective = [&](double xv) { return upper ? log_gamma_q(a, xv) - target_log : log_gamma_p(a, xv) - target_log; };

  // Bracket in x: objective decreases in x for upper, increases for lower.
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < 300; ++iter) {
    const double f = objective(x);
    const bool below = upper ? (f > 0.0) : (f < 0.0);  // root lies to the right of x
    if (below)
      lo = x;
    else
      hi = x;
    if (std::fabs(f) < 1e-14) return x;
    // d ln Q / dx = -density/Q, d ln P / dx = density/P
    const double log_density = (a - 1.0) * std::log(x) - x - log_gamma(a);
    const double log_prob = f + target_log;
    double slope = std::exp(log_density - log_prob);
    if (upper) slope = -slope;
    double next = x - f / slope;
    if (!(next > lo && next < hi) || !std::isfinite(next)) {
      if (std::isfinite(hi))
        next = (lo > 0.0) ? std::sqrt(lo * hi) : 0.5 * hi;
      else
        next = 2.0 * x + 1.0;
    }
    if (std::fabs(next - x) <= 1e-15 * x) return next;
    if (std::isfinite(hi) && lo > 0.0 && (hi - lo) <= 4e-16 * hi) return 0.5 * (lo + hi);
    x = next;
  }
  throw NumericError("gamma quantile iteration did not converge");
}

}  // namespace

double log_gamma(double x) {
  if (!std::isfinite(x) || !(x > 0.0)) throw DomainError("log_gamma: argument must be positive and finite");
  int sign = 0;
  return ::lgamma_r(x, &sign);
}

double log_gamma_p(double a, double x) {
  check_shape_arg(a, x);
  if (x == 0.0) return -std::numeric_limits<double>::infinity();
  if (std::isinf(x)) return 0.0;
  if (x < a + 1.0) return log_p_series(a, x);
  return std::log1p(-std::exp(log_q_fraction(a, x)));
}

double log_gamma_q(double a, double x) {
  check_shape_arg(a, x);
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return -std::numeric_limits<double>::infinity();
  if (x < a + 1.0) return std::log1p(-std::exp(log_p_series(a, x)));
  return log_q_fraction(a, x);
}

double gamma_p(double a, double x) { return std::exp(log_gamma_p(a, x)); }
double gamma_q(double a, double x) { return std::exp(log_gamma_q(a, x)); }

double log_gamma_survival(double r, const GammaParams& params) {
  check_params(params);
  if (std::isnan(r) || r < 0.0) throw DomainError("gamma_survival: r must be nonnegative");
  return log_gamma_q(params.shape, params.rate * r);
}

double gamma_survival(double r, const GammaParams& params) { return std::exp(log_gamma_survival(r, params)); }

double gamma_cdf(double r, const GammaParams& params) {
  check_params(params);
  if (std::isnan(r) || r < 0.0) throw DomainError("gamma_cdf: r must be nonnegative");
  return gamma_p(params.shape, params.rate * r);
}

double gamma_quantile(double p, const GammaParams& params) {
  check_params(params);
  if (!(p > 0.0 && p < 1.0)) throw DomainError("gamma_quantile: p must lie in (0,1)");
  const double x = (p < 0.5) ? solve_standard_quantile(params.shape, std::log(p), false)
                             : solve_standard_quantile(params.shape, std::log1p(-p), true);
  return x / params.rate;
}

double gamma_quantile_upper_log(double log_survival, const GammaParams& params) {
  check_params(params);
  if (!(log_survival < 0.0) || std::isnan(log_survival)) throw DomainError("log survival must be negative");
  const double x = (log_survival > -std::numbers::ln2)
                       ? solve_standard_quantile(params.shape, std::log(-std::expm1(log_survival)), false)
                       : solve_standard_quantile(params.shape, log_survival, true);
  return x / params.rate;
}

double sample_trunc_gamma(RngStream& rng, const GammaParams& params, double lower) {
  check_params(params);
  if (std::isnan(lower) || lower < 0.0) throw DomainError("truncation point must be nonnegative");
  const double log_s_lower = log_gamma_survival(lower, params);
  for (;;) {
    const double log_s = std::log(rng.uniform()) + log_s_lower;
    const double r = gamma_quantile_upper_log(log_s, params);
    if (r > lower) return r;
  }
}

}  // namespace geomdep
