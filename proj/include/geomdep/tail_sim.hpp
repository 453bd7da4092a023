#pragma once

#include <limits>
#include <vector>

#include "geomdep/gauge.hpp"
#include "geomdep/rng.hpp"
#include "geomdep/threshold.hpp"

namespace geomdep {

struct FittedModel {
  GaugePtr gauge;
  double lambda = 2.0;
  ThresholdFunction threshold;
  std::vector<double> exceedance_angles;  // w of records with R' > 1
  double p_exceed = 0.0;                  // empirical P(R' > 1)
};

// Collects the exceedance angles and rate from the data used for the fit.
FittedModel make_fitted_model(GaugePtr gauge, double lambda, ThresholdFunction threshold,
                              const AngularRadialSample& sample);

// Open rectangle on the exponential scale; upper limits may be +inf.
struct RegionSpec {
  double x_lo = 0.0;
  double x_hi = std::numeric_limits<double>::infinity();
  double y_lo = 0.0;
  double y_hi = std::numeric_limits<double>::infinity();
};

// Survival-ratio weights P(R > k t(w)) / P(R > t(w)) at each exceedance angle.
std::vector<double> angle_weights(const FittedModel& model, double k);

// Draws X | R' > k.
PointCloud simulate_conditional(const FittedModel& model, double k, std::size_t n_sim, RngStream& rng);

// Largest k >= 0 with the region outside k * r_tau, checked on an angular grid.
double largest_k(const FittedModel& model, const RegionSpec& region);

struct ProbabilityEstimate {
  double probability = 0.0;
  double std_error = 0.0;
  double k = 1.0;
  double mean_weight = 1.0;  // estimate of P(R' > k | R' > 1)
  std::size_t hits = 0;
  std::size_t n_sim = 0;
};

ProbabilityEstimate estimate_region_prob(const FittedModel& model, const RegionSpec& region, std::size_t n_sim,
                                         RngStream& rng);
// Same, at a caller-chosen extrapolation level k (must not exceed largest_k).
ProbabilityEstimate estimate_region_prob_at(const FittedModel& model, const RegionSpec& region, double k,
                                            std::size_t n_sim, RngStream& rng);

struct ChiEstimate {
  double u = 0.0;
  double chi = 0.0;
  double std_error = 0.0;
  std::size_t joint_hits = 0;
  std::size_t marginal_hits = 0;
};

ChiEstimate estimate_chi_m(const FittedModel& model, double u, std::size_t n_sim, RngStream& rng);

}  // namespace geomdep
