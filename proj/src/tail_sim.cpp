#include "geomdep/tail_sim.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>

#include "geomdep/errors.hpp"
#include "geomdep/kernels.hpp"
#include "geomdep/special_math.hpp"

namespace geomdep {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_model(const FittedModel& model) {
  if (!model.gauge) throw DomainError("fitted model has no gauge");
  if (model.exceedance_angles.empty()) throw DomainError("fitted model has no exceedance angles");
  if (!(model.p_exceed > 0.0 && model.p_exceed < 1.0)) throw DomainError("fitted model exceedance rate outside (0,1)");
  if (!(model.lambda > 0.0)) throw DomainError("fitted model lambda must be positive");
}

// Per-angle quantities shared by the weights and the sampler.
struct AngleTable {
  std::vector<double> w, rate, lower, log_s_lower, weight;
  double weight_sum = 0.0;
};

AngleTable build_table(const FittedModel& model, double k) {
  if (!(k >= 1.0) || !std::isfinite(k)) throw DomainError("extrapolation level k must be >= 1");
  AngleTable tab;
  const std::size_t n = model.exceedance_angles.size();
  tab.w = model.exceedance_angles;
  tab.rate.resize(n);
  tab.lower.resize(n);
  tab.log_s_lower.resize(n);
  tab.weight.resize(n);
  model.gauge->eval_angular(tab.w.data(), n, tab.rate.data());
  for (std::size_t i = 0; i < n; ++i) {
    const GammaParams gp{model.lambda, tab.rate[i]};
    const double t = model.threshold(tab.w[i]);
    tab.lower[i] = k * t;
    tab.log_s_lower[i] = log_gamma_survival(tab.lower[i], gp);
    tab.weight[i] = k == 1.0 ? 1.0 : std::exp(tab.log_s_lower[i] - log_gamma_survival(t, gp));
    tab.weight_sum += tab.weight[i];
  }
  return tab;
}

// Entry radius of the ray (w, 1-w) into the closed rectangle, or +inf if it misses.
double entry_radius(const RegionSpec& reg, double w) {
  const double v = 1.0 - w;
  auto lower_term = [](double lo, double c) {
    if (c > 0.0) return lo / c;
    return lo > 0.0 ? kInf : 0.0;
  };
  auto upper_term = [](double hi, double c) {
    if (c > 0.0) return hi / c;
    return hi >= 0.0 ? kInf : 0.0;
  };
  const double lo = std::max(lower_term(reg.x_lo, w), lower_term(reg.y_lo, v));
  const double hi = std::min(upper_term(reg.x_hi, w), upper_term(reg.y_hi, v));
  return lo < hi ? lo : kInf;
}

}  // namespace

FittedModel make_fitted_model(GaugePtr gauge, double lambda, ThresholdFunction threshold,
                              const AngularRadialSample& sample) {
  FittedModel model;
  model.gauge = std::move(gauge);
  model.lambda = lambda;
  model.threshold = std::move(threshold);
  for (std::size_t i = 0; i < sample.size(); ++i)
    if (sample.r[i] > model.threshold(sample.w[i])) model.exceedance_angles.push_back(sample.w[i]);
  model.p_exceed = sample.size() ? static_cast<double>(model.exceedance_angles.size()) / static_cast<double>(sample.size()) : 0.0;
  check_model(model);
  return model;
}

std::vector<double> angle_weights(const FittedModel& model, double k) {
  check_model(model);
  return build_table(model, k).weight;
}

PointCloud simulate_conditional(const FittedModel& model, double k, std::size_t n_sim, RngStream& rng) {
  check_model(model);
  if (n_sim == 0) throw DomainError("n_sim must be positive");
  const auto tab = build_table(model, k);
  if (!(tab.weight_sum > 0.0)) throw NumericError("all angle weights vanish: extrapolation level k too large");
  std::vector<double> cumulative(tab.weight.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < tab.weight.size(); ++i) cumulative[i] = (acc += tab.weight[i]);

  PointCloud out;
  out.x.resize(n_sim);
  out.y.resize(n_sim);
  for (std::size_t s = 0; s < n_sim; ++s) {
    const double u = rng.uniform() * acc;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) --it;
    const auto j = static_cast<std::size_t>(it - cumulative.begin());
    const GammaParams gp{model.lambda, tab.rate[j]};
    double r;
    do {
      r = gamma_quantile_upper_log(std::log(rng.uniform()) + tab.log_s_lower[j], gp);
    } while (!(r > tab.lower[j]));
    out.x[s] = r * tab.w[j];
    out.y[s] = r * (1.0 - tab.w[j]);
  }
  return out;
}

double largest_k(const FittedModel& model, const RegionSpec& region) {
  if (!(region.x_lo < region.x_hi) || !(region.y_lo < region.y_hi)) throw DomainError("region needs lo < hi per axis");
  std::vector<double> angles;
  for (int i = 0; i <= 720; ++i) angles.push_back(i / 720.0);
  for (double knot : model.threshold.knots()) angles.push_back(knot);
  for (double cx : {region.x_lo, region.x_hi})
    for (double cy : {region.y_lo, region.y_hi})
      if (std::isfinite(cx) && std::isfinite(cy) && cx + cy > 0.0) angles.push_back(cx / (cx + cy));
  std::sort(angles.begin(), angles.end());
  angles.erase(std::unique(angles.begin(), angles.end()), angles.end());

  auto ratio = [&](double w) { return entry_radius(region, w) / model.threshold(w); };
  std::size_t arg = 0;
  double best = kInf;
  for (std::size_t i = 0; i < angles.size(); ++i) {
    const double v = ratio(angles[i]);
    if (v < best) {
      best = v;
      arg = i;
    }
  }
  if (!std::isfinite(best)) throw DomainError("region is not reachable along any angle");
  const double a = angles[arg == 0 ? 0 : arg - 1];
  const double b = angles[std::min(arg + 1, angles.size() - 1)];
  if (b > a) {
    const auto refined = boost::math::tools::brent_find_minima(ratio, a, b, 40);
    best = std::min(best, refined.second);
  }
  return best * (1.0 - 1e-9);
}

ProbabilityEstimate estimate_region_prob_at(const FittedModel& model, const RegionSpec& region, double k,
                                            std::size_t n_sim, RngStream& rng) {
  check_model(model);
  const auto weights = angle_weights(model, k);
  double mean_w = 0.0;
  for (double v : weights) mean_w += v;
  mean_w /= static_cast<double>(weights.size());
  const auto pts = simulate_conditional(model, k, n_sim, rng);
  ProbabilityEstimate est;
  est.k = k;
  est.n_sim = n_sim;
  est.mean_weight = mean_w;
  est.hits = kernels::count_in_rect(pts.x.data(), pts.y.data(), n_sim, region.x_lo, region.x_hi, region.y_lo, region.y_hi);
  const double f = static_cast<double>(est.hits) / static_cast<double>(n_sim);
  const double scale = model.p_exceed * mean_w;
  est.probability = scale * f;
  est.std_error = scale * std::sqrt(f * (1.0 - f) / static_cast<double>(n_sim));
  return est;
}

ProbabilityEstimate estimate_region_prob(const FittedModel& model, const RegionSpec& region, std::size_t n_sim,
                                         RngStream& rng) {
  check_model(model);
  const double k = largest_k(model, region);
  if (k < 1.0) throw DomainError("region intersects the sub-threshold zone");
  return estimate_region_prob_at(model, region, k, n_sim, rng);
}

ChiEstimate estimate_chi_m(const FittedModel& model, double u, std::size_t n_sim, RngStream& rng) {
  check_model(model);
  if (!(u > 0.0 && u < 1.0)) throw DomainError("u must lie in (0,1)");
  const double level = -std::log1p(-u);
  const RegionSpec marginal{level, kInf, 0.0, kInf};
  const double k = largest_k(model, marginal);
  if (k < 1.0) throw DomainError("u is below the fitted threshold");
  const auto pts = simulate_conditional(model, k, n_sim, rng);
  ChiEstimate est;
  est.u = u;
  est.joint_hits = kernels::count_joint_exceed(pts.x.data(), pts.y.data(), n_sim, level, level);
  est.marginal_hits = kernels::count_in_rect(pts.x.data(), pts.y.data(), n_sim, level, kInf, 0.0, kInf);
  if (est.marginal_hits == 0) throw NumericError("no simulated marginal exceedances");
  est.chi = static_cast<double>(est.joint_hits) / static_cast<double>(est.marginal_hits);
  est.std_error = std::sqrt(est.chi * (1.0 - est.chi) / static_cast<double>(est.marginal_hits));
  return est;
}

}  // namespace geomdep
