#include "geomdep/inference.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "geomdep/errors.hpp"
#include "geomdep/kernels.hpp"
#include "geomdep/special_math.hpp"

namespace geomdep {

namespace {

constexpr double kPenalty = 1e100;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct ObjectiveContext {
  ModelKind kind;
  const Exceedances* exc;
};

double gsl_objective(const gsl_vector* v, void* raw) {
  const auto* ctx = static_cast<const ObjectiveContext*>(raw);
  std::vector<double> free(v->size);
  for (std::size_t i = 0; i < v->size; ++i) free[i] = gsl_vector_get(v, i);
  const double value = negloglik(ctx->kind, from_unconstrained(ctx->kind, free), *ctx->exc);
  return std::isfinite(value) ? value : kPenalty;
}

struct MinimizerDeleter {
  void operator()(gsl_multimin_fminimizer* m) const { gsl_multimin_fminimizer_free(m); }
};
struct VectorDeleter {
  void operator()(gsl_vector* v) const { gsl_vector_free(v); }
};

struct RunResult {
  std::vector<double> free;
  double value = kInf;
  bool converged = false;
  int iterations = 0;
};

RunResult run_simplex(ObjectiveContext& ctx, const std::vector<double>& start_free, const OptimizerConfig& config) {
  static const bool handler_off = (gsl_set_error_handler_off(), true);
  (void)handler_off;
  const std::size_t dim = start_free.size();
  gsl_multimin_function fn{&gsl_objective, dim, &ctx};
  std::unique_ptr<gsl_vector, VectorDeleter> x(gsl_vector_alloc(dim));
  std::unique_ptr<gsl_vector, VectorDeleter> step(gsl_vector_alloc(dim));
  for (std::size_t i = 0; i < dim; ++i) {
    gsl_vector_set(x.get(), i, start_free[i]);
    gsl_vector_set(step.get(), i, config.initial_step);
  }
  std::unique_ptr<gsl_multimin_fminimizer, MinimizerDeleter> s(
      gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, dim));
  RunResult out;
  if (gsl_multimin_fminimizer_set(s.get(), &fn, x.get(), step.get()) != GSL_SUCCESS) return out;
  int status = GSL_CONTINUE;
  int iter = 0;
  while (status == GSL_CONTINUE && iter < config.max_iterations) {
    ++iter;
    if (gsl_multimin_fminimizer_iterate(s.get()) != GSL_SUCCESS) break;
    status = gsl_multimin_test_size(gsl_multimin_fminimizer_size(s.get()), config.size_tolerance);
  }
  out.iterations = iter;
  out.converged = status == GSL_SUCCESS;
  out.value = s->fval;
  out.free.resize(dim);
  for (std::size_t i = 0; i < dim; ++i) out.free[i] = gsl_vector_get(s->x, i);
  if (!(out.value < kPenalty)) out.converged = false;
  return out;
}

std::optional<std::vector<double>> hessian_standard_errors(ModelKind kind, const std::vector<double>& est,
                                                           const Exceedances& exc) {
  const std::size_t d = est.size();
  std::vector<double> h(d);
  for (std::size_t i = 0; i < d; ++i) h[i] = 1e-4 * std::max(std::fabs(est[i]), 1e-2);
  auto f = [&](std::vector<double> p) { return negloglik(kind, p, exc); };
  const double f0 = f(est);
  Eigen::MatrixXd hess(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      double v;
      if (i == j) {
        auto up = est, dn = est;
        up[i] += h[i];
        dn[i] -= h[i];
        v = (f(up) - 2.0 * f0 + f(dn)) / (h[i] * h[i]);
      } else {
        auto pp = est, pm = est, mp = est, mm = est;
        pp[i] += h[i], pp[j] += h[j];
        pm[i] += h[i], pm[j] -= h[j];
        mp[i] -= h[i], mp[j] += h[j];
        mm[i] -= h[i], mm[j] -= h[j];
        v = (f(pp) - f(pm) - f(mp) + f(mm)) / (4.0 * h[i] * h[j]);
      }
      if (!std::isfinite(v)) return std::nullopt;
      hess(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
      hess(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
    }
  }
  Eigen::LLT<Eigen::MatrixXd> llt(hess);
  if (llt.info() != Eigen::Success) return std::nullopt;
  const Eigen::MatrixXd cov = llt.solve(Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d)));
  std::vector<double> se(d);
  for (std::size_t i = 0; i < d; ++i) se[i] = std::sqrt(cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)));
  return se;
}

}  // namespace

Exceedances make_exceedances(const AngularRadialSample& sample, const ThresholdFunction& threshold) {
  Exceedances exc;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double t = threshold(sample.w[i]);
    if (sample.r[i] > t) {
      exc.r.push_back(sample.r[i]);
      exc.w.push_back(sample.w[i]);
      exc.t.push_back(t);
    }
  }
  return exc;
}

double negloglik(double lambda, const Gauge& g, const Exceedances& exc) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) return kInf;
  const std::size_t n = exc.size();
  std::vector<double> rate(n);
  g.eval_angular(exc.w.data(), n, rate.data());
  const double lg = log_gamma(lambda);
  double sum_log_rate = 0.0, sum_log_r = 0.0, sum_log_surv = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double b = rate[i];
    if (!(b > 0.0) || !std::isfinite(b)) return kInf;
    sum_log_rate += std::log(b);
    sum_log_r += std::log(exc.r[i]);
    sum_log_surv += log_gamma_q(lambda, b * exc.t[i]);
  }
  const double sum_r_rate = kernels::dot(exc.r.data(), rate.data(), n);
  const double ll = lambda * sum_log_rate - static_cast<double>(n) * lg + (lambda - 1.0) * sum_log_r - sum_r_rate -
                    sum_log_surv;
  return std::isfinite(ll) ? -ll : kInf;
}

double negloglik(ModelKind kind, const std::vector<double>& natural, const Exceedances& exc) {
  if (natural.size() != gauge_param_count(kind) + 1) return kInf;
  try {
    const auto g = build_gauge(kind, {natural.begin() + 1, natural.end()});
    return negloglik(natural[0], *g, exc);
  } catch (const DomainError&) {
    return kInf;
  } catch (const NumericError&) {
    return kInf;
  }
}

FitResult fit(const Exceedances& exc, ModelKind family, const std::optional<std::vector<double>>& init,
              const OptimizerConfig& config) {
  const std::size_t n_params = gauge_param_count(family) + 1;
  if (exc.size() < 10 * n_params)
    throw InsufficientData("fit of " + to_string(family) + " needs at least " + std::to_string(10 * n_params) +
                           " exceedances, got " + std::to_string(exc.size()));
  std::vector<std::vector<double>> starts;
  if (init) starts.push_back(*init);
  const auto& extra = config.starts.empty() ? default_starts(family) : config.starts;
  starts.insert(starts.end(), extra.begin(), extra.end());

  ObjectiveContext ctx{family, &exc};
  RunResult best;
  int total_iterations = 0;
  int converged_count = 0;
  for (const auto& start : starts) {
    const auto run = run_simplex(ctx, to_unconstrained(family, start), config);
    total_iterations += run.iterations;
    if (run.converged) ++converged_count;
    const bool better = (run.converged && !best.converged) ||
                        (run.converged == best.converged && run.value < best.value);
    if (better) best = run;
  }

  FitResult out;
  out.family = family;
  out.names = {"lambda"};
  for (auto& n : gauge_param_names(family)) out.names.push_back(n);
  out.n_exceed = exc.size();
  out.iterations = total_iterations;
  out.starts_converged = converged_count;
  if (best.free.empty() || !(best.value < kPenalty)) {
    out.converged = false;
    out.nll = kInf;
    out.aic = kInf;
    out.estimates = starts.front();
    out.message = "no start produced a finite likelihood";
    return out;
  }
  out.estimates = from_unconstrained(family, best.free);
  out.nll = best.value;
  out.aic = 2.0 * static_cast<double>(n_params) + 2.0 * best.value;
  out.converged = best.converged;
  out.at_boundary = std::any_of(best.free.begin(), best.free.end(), [](double u) { return std::fabs(u) > 15.0; });
  out.message = out.converged ? (out.at_boundary ? "converged at a parameter boundary" : "converged")
                              : "iteration limit reached";
  if (config.standard_errors && out.converged) out.standard_errors = hessian_standard_errors(family, out.estimates, exc);
  return out;
}

GaugePtr fitted_gauge(const FitResult& fit) { return build_gauge(fit.family, fit.gauge_params()); }

std::vector<std::pair<double, double>> pp_points(double lambda, const Gauge& g, const Exceedances& exc) {
  const std::size_t n = exc.size();
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i) {
    const GammaParams gp{lambda, g.eval(exc.w[i], 1.0 - exc.w[i])};
    u[i] = -std::expm1(log_gamma_survival(exc.r[i], gp) - log_gamma_survival(exc.t[i], gp));
  }
  std::sort(u.begin(), u.end());
  std::vector<std::pair<double, double>> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = {u[i], static_cast<double>(i + 1) / static_cast<double>(n + 1)};
  return out;
}

std::vector<std::pair<double, double>> pp_points(const FitResult& fit, const Exceedances& exc) {
  return pp_points(fit.lambda(), *fitted_gauge(fit), exc);
}

double ks_uniform_distance(std::vector<double> u) {
  if (u.empty()) throw InsufficientData("KS distance of an empty sample");
  std::sort(u.begin(), u.end());
  const double n = static_cast<double>(u.size());
  double d = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double ui = std::clamp(u[i], 0.0, 1.0);
    d = std::max({d, static_cast<double>(i + 1) / n - ui, ui - static_cast<double>(i) / n});
  }
  return d;
}

}  // namespace geomdep
