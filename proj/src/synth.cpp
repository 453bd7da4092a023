#include "geomdep/synth.hpp"

#include <algorithm>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numbers>

#include "geomdep/errors.hpp"
#include "geomdep/kernels.hpp"

namespace geomdep {

namespace {

// Unit Frechet z to standard exponential: x = -log(1 - exp(-1/z)).
double frechet_to_exp(double z) { return -std::log(-std::expm1(-1.0 / z)); }

void check_open_unit(double v, const char* what) {
  if (!(v > 0.0 && v < 1.0)) throw DomainError(std::string(what) + " must lie in (0,1)");
}

// Log of two unit-Frechet logistic variates (log Z1, log Z2).
std::pair<double, double> logistic_log_frechet(double gamma, RngStream& rng) {
  const double log_s = std::log(sample_positive_stable(gamma, rng));
  const double e1 = rng.exponential();
  const double e2 = rng.exponential();
  return {gamma * (log_s - std::log(e1)), gamma * (log_s - std::log(e2))};
}

double dirichlet_kernel(double w, double alpha, double beta) {
  return std::exp((alpha - 1.0) * std::log(w) + (beta - 1.0) * std::log1p(-w) -
                  (alpha + beta + 1.0) * std::log(alpha * w + beta * (1.0 - w)));
}

}  // namespace

double sample_positive_stable(double alpha, RngStream& rng) {
  check_open_unit(alpha, "stable index");
  // Kanter / Chambers-Mallows-Stuck representation in log form.
  const double u = std::numbers::pi * rng.uniform();
  const double e = rng.exponential();
  const double log_s = std::log(std::sin(alpha * u)) - std::log(std::sin(u)) / alpha +
                       ((1.0 - alpha) / alpha) * (std::log(std::sin((1.0 - alpha) * u)) - std::log(e));
  return std::exp(log_s);
}

PointCloud sample_logistic_copula(std::size_t n, double gamma, RngStream& rng) {
  check_open_unit(gamma, "logistic gamma");
  PointCloud out;
  out.x.resize(n);
  out.y.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto [l1, l2] = logistic_log_frechet(gamma, rng);
    out.x[i] = frechet_to_exp(std::exp(l1));
    out.y[i] = frechet_to_exp(std::exp(l2));
  }
  return out;
}

PointCloud sample_inverted_logistic(std::size_t n, double theta, RngStream& rng) {
  check_open_unit(theta, "inverted-logistic theta");
  PointCloud out;
  out.x.resize(n);
  out.y.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    // Survival copula of the logistic: exponential transform of 1 - U is -log U = 1/Z.
    const auto [l1, l2] = logistic_log_frechet(theta, rng);
    out.x[i] = std::exp(-l1);
    out.y[i] = std::exp(-l2);
  }
  return out;
}

PointCloud sample_gaussian_copula(std::size_t n, double rho, RngStream& rng) {
  if (!(rho > -1.0 && rho < 1.0)) throw DomainError("gaussian rho must lie in (-1,1)");
  const double c = std::sqrt(1.0 - rho * rho);
  PointCloud out;
  out.x.resize(n);
  out.y.resize(n);
  auto to_exp = [](double z) { return -std::log(0.5 * std::erfc(z / std::numbers::sqrt2)); };
  for (std::size_t i = 0; i < n; ++i) {
    const double z1 = rng.normal();
    const double z2 = rho * z1 + c * rng.normal();
    out.x[i] = to_exp(z1);
    out.y[i] = to_exp(z2);
  }
  return out;
}

double sample_dirichlet_angle(double alpha, double beta, RngStream& rng) {
  if (!(alpha > 0.0 && beta > 0.0) || !std::isfinite(alpha) || !std::isfinite(beta))
    throw DomainError("dirichlet parameters must be positive");
  const double lo = std::min(alpha, beta);
  const double power = alpha + beta + 1.0;
  for (int attempt = 0; attempt < 100000; ++attempt) {
    const double g1 = rng.gamma(alpha);
    const double g2 = rng.gamma(beta);
    const double w = g1 / (g1 + g2);
    if (!(w > 0.0 && w < 1.0)) continue;
    // Beta(alpha, beta) envelope; the density ratio is proportional to (alpha w + beta (1 - w))^-power.
    const double accept = std::exp(power * (std::log(lo) - std::log(alpha * w + beta * (1.0 - w))));
    if (rng.uniform() <= accept) return w;
  }
  throw NumericError("dirichlet angle rejection sampler failed");
}

PointCloud sample_dirichlet_model(std::size_t n, double alpha, double beta, RngStream& rng) {
  if (!(alpha > 0.0 && beta > 0.0)) throw DomainError("dirichlet parameters must be positive");
  PointCloud out;
  out.x.resize(n);
  out.y.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    // Componentwise maxima of the points 2 (W, 1 - W) / Gamma_j. Every later
    // point has both coordinates below 2 / Gamma_j, so stopping once that bound
    // falls under min(Z) leaves the maxima exact.
    double z1 = 0.0, z2 = 0.0, arrival = 0.0;
    for (;;) {
      arrival += rng.exponential();
      const double bound = 2.0 / arrival;
      if (bound < std::min(z1, z2)) break;
      const double w = sample_dirichlet_angle(alpha, beta, rng);
      z1 = std::max(z1, bound * w);
      z2 = std::max(z2, bound * (1.0 - w));
    }
    out.x[i] = frechet_to_exp(z1);
    out.y[i] = frechet_to_exp(z2);
  }
  return out;
}

double dirichlet_chi(double alpha, double beta) {
  if (!(alpha > 0.0 && beta > 0.0) || !std::isfinite(alpha) || !std::isfinite(beta))
    throw DomainError("dirichlet parameters must be positive");
  boost::math::quadrature::tanh_sinh<double> integrator;
  auto mass = [&](double w) { return dirichlet_kernel(w, alpha, beta); };
  auto tail = [&](double w) { return std::min(w, 1.0 - w) * dirichlet_kernel(w, alpha, beta); };
  const double z = integrator.integrate(mass, 0.0, 1.0);
  return 2.0 * integrator.integrate(tail, 0.0, 1.0) / z;
}

std::string to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::Logistic: return "logistic";
    case GeneratorKind::Gaussian: return "gaussian";
    case GeneratorKind::InvertedLogistic: return "invlogistic";
    case GeneratorKind::Dirichlet: return "dirichlet";
  }
  return "unknown";
}

GeneratorKind parse_generator_kind(const std::string& name) {
  for (auto k : {GeneratorKind::Logistic, GeneratorKind::Gaussian, GeneratorKind::InvertedLogistic, GeneratorKind::Dirichlet})
    if (to_string(k) == name) return k;
  throw DomainError("unknown generator '" + name + "'");
}

PointCloud generate(const GeneratorSpec& spec, std::size_t n, RngStream& rng) {
  switch (spec.kind) {
    case GeneratorKind::Logistic: return sample_logistic_copula(n, spec.a, rng);
    case GeneratorKind::Gaussian: return sample_gaussian_copula(n, spec.a, rng);
    case GeneratorKind::InvertedLogistic: return sample_inverted_logistic(n, spec.a, rng);
    case GeneratorKind::Dirichlet: return sample_dirichlet_model(n, spec.a, spec.b, rng);
  }
  throw DomainError("unknown generator");
}

const std::vector<Scenario>& scenario_catalog() {
  using G = GeneratorKind;
  static const std::vector<Scenario> catalog = {
      {"st.d.AD", "logistic", {G::Logistic, 0.2, 0.0}, true, 0.85, 1.0},
      {"st.d.AD", "dirichlet", {G::Dirichlet, 14.0, 14.0}, true, 0.85, 1.0},
      {"mst.d.AD", "logistic", {G::Logistic, 0.4, 0.0}, true, 0.68, 1.0},
      {"mst.d.AD", "dirichlet", {G::Dirichlet, 2.85, 2.85}, true, 0.68, 1.0},
      {"w.d.AD", "logistic", {G::Logistic, 0.8, 0.0}, true, 0.26, 1.0},
      {"w.d.AD", "dirichlet", {G::Dirichlet, 0.285, 0.285}, true, 0.26, 1.0},
      {"st.d.AI", "invlogistic", {G::InvertedLogistic, 0.2, 0.0}, false, 0.0, 0.87},
      {"st.d.AI", "gaussian", {G::Gaussian, 0.74, 0.0}, false, 0.0, 0.87},
      {"w.d.AI", "invlogistic", {G::InvertedLogistic, 0.8, 0.0}, false, 0.0, 0.57},
      {"w.d.AI", "gaussian", {G::Gaussian, 0.14, 0.0}, false, 0.0, 0.57},
  };
  return catalog;
}

const Scenario& find_scenario(const std::string& name, const std::string& structure) {
  for (const auto& s : scenario_catalog())
    if (s.name == name && s.structure == structure) return s;
  throw DomainError("unknown scenario '" + name + "' with structure '" + structure + "'");
}

double empirical_chi(const PointCloud& pts, double u) {
  if (!(u > 0.0 && u < 1.0)) throw DomainError("u must lie in (0,1)");
  const double q = -std::log1p(-u);
  const std::size_t n = pts.size();
  const std::size_t joint = kernels::count_joint_exceed(pts.x.data(), pts.y.data(), n, q, q);
  const double inf = std::numeric_limits<double>::infinity();
  const std::size_t marginal = kernels::count_in_rect(pts.x.data(), pts.y.data(), n, q, inf, -inf, inf);
  if (marginal == 0) throw InsufficientData("no marginal exceedances at this u");
  return static_cast<double>(joint) / static_cast<double>(marginal);
}

}  // namespace geomdep
