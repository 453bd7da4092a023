#pragma once

#include <string>
#include <vector>

#include "geomdep/rng.hpp"
#include "geomdep/threshold.hpp"

namespace geomdep {

// Samplers on standard exponential margins.
PointCloud sample_logistic_copula(std::size_t n, double gamma, RngStream& rng);
PointCloud sample_gaussian_copula(std::size_t n, double rho, RngStream& rng);
PointCloud sample_inverted_logistic(std::size_t n, double theta, RngStream& rng);
PointCloud sample_dirichlet_model(std::size_t n, double alpha, double beta, RngStream& rng);

// Positive stable variate with Laplace transform exp(-t^alpha).
double sample_positive_stable(double alpha, RngStream& rng);
// Angle from the Dirichlet spectral density (probability-normalized).
double sample_dirichlet_angle(double alpha, double beta, RngStream& rng);
// chi = 2 E[min(W, 1 - W)] under the Dirichlet spectral density, by quadrature.
double dirichlet_chi(double alpha, double beta);

enum class GeneratorKind { Logistic, Gaussian, InvertedLogistic, Dirichlet };

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::Logistic;
  double a = 0.5;  // gamma, rho, theta or alpha
  double b = 0.0;  // beta for the Dirichlet model
};

std::string to_string(GeneratorKind kind);
GeneratorKind parse_generator_kind(const std::string& name);
PointCloud generate(const GeneratorSpec& spec, std::size_t n, RngStream& rng);

struct Scenario {
  std::string name;       // st.d.AD, mst.d.AD, w.d.AD, st.d.AI, w.d.AI
  std::string structure;  // logistic, dirichlet, invlogistic, gaussian
  GeneratorSpec generator;
  bool asymptotically_dependent = true;
  double chi = 0.0;  // truth for AD scenarios
  double eta = 1.0;  // truth for AI scenarios
};

const std::vector<Scenario>& scenario_catalog();
const Scenario& find_scenario(const std::string& name, const std::string& structure);

// Empirical P(Y > q_u | X > q_u) with q_u = -log(1 - u) on exponential margins.
double empirical_chi(const PointCloud& pts, double u);

}  // namespace geomdep
