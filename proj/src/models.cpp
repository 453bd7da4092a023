#include "geomdep/models.hpp"

#include <cmath>

#include "geomdep/additive_mix.hpp"
#include "geomdep/errors.hpp"
#include "geomdep/stochastic_mix.hpp"

namespace geomdep {

namespace {

enum class Transform { Log, Logit };

double logit(double p) { return std::log(p) - std::log1p(-p); }
double sigmoid(double u) { return u >= 0.0 ? 1.0 / (1.0 + std::exp(-u)) : std::exp(u) / (1.0 + std::exp(u)); }

std::vector<Transform> transforms(ModelKind kind) {
  switch (kind) {
    case ModelKind::ExpGa:
    case ModelKind::ExpInv:
    case ModelKind::ExpRect: return {Transform::Logit, Transform::Log};
    case ModelKind::GaLog:
    case ModelKind::InvLog:
    case ModelKind::RectLog: return {Transform::Logit, Transform::Logit, Transform::Logit};
    case ModelKind::MM: return {Transform::Log};
  }
  throw DomainError("unknown model kind");
}

}  // namespace

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::ExpGa: return "expga";
    case ModelKind::ExpInv: return "expinv";
    case ModelKind::ExpRect: return "exprect";
    case ModelKind::GaLog: return "galog";
    case ModelKind::InvLog: return "invlog";
    case ModelKind::RectLog: return "rectlog";
    case ModelKind::MM: return "mm";
  }
  return "unknown";
}

ModelKind parse_model_kind(const std::string& name) {
  for (auto kind : all_model_kinds())
    if (to_string(kind) == name) return kind;
  throw DomainError("unknown model family '" + name + "'");
}

const std::vector<ModelKind>& all_model_kinds() {
  static const std::vector<ModelKind> kinds = {ModelKind::ExpGa,  ModelKind::ExpInv,  ModelKind::ExpRect, ModelKind::GaLog,
                                               ModelKind::InvLog, ModelKind::RectLog, ModelKind::MM};
  return kinds;
}

std::vector<std::string> gauge_param_names(ModelKind kind) {
  switch (kind) {
    case ModelKind::ExpGa: return {"rho", "gamma"};
    case ModelKind::ExpInv:
    case ModelKind::ExpRect: return {"theta", "gamma"};
    case ModelKind::GaLog: return {"p", "rho", "gamma"};
    case ModelKind::InvLog:
    case ModelKind::RectLog: return {"p", "theta", "gamma"};
    case ModelKind::MM: return {"theta"};
  }
  throw DomainError("unknown model kind");
}

std::size_t gauge_param_count(ModelKind kind) { return gauge_param_names(kind).size(); }

GaugePtr build_gauge(ModelKind kind, const std::vector<double>& gp) {
  if (gp.size() != gauge_param_count(kind)) throw DomainError("wrong number of gauge parameters for " + to_string(kind));
  switch (kind) {
    case ModelKind::ExpGa: return make_stochastic_mix({StochasticBase::Gaussian, gp[0], gp[1]});
    case ModelKind::ExpInv:
      if (!(gp[0] < 1.0)) throw DomainError("expinv needs theta < 1");
      return make_stochastic_mix({StochasticBase::InvertedLogistic, gp[0], gp[1]});
    case ModelKind::ExpRect: return make_stochastic_mix({StochasticBase::Rectangular, gp[0], gp[1]});
    case ModelKind::GaLog: return build_rescaled_mixture({MixtureFirst::Gaussian, gp[1], gp[2], gp[0]});
    case ModelKind::InvLog: return build_rescaled_mixture({MixtureFirst::InvertedLogistic, gp[1], gp[2], gp[0]});
    case ModelKind::RectLog: return build_rescaled_mixture({MixtureFirst::Rectangular, gp[1], gp[2], gp[0]});
    case ModelKind::MM: return make_maxmin(gp[0]);
  }
  throw DomainError("unknown model kind");
}

std::vector<double> to_unconstrained(ModelKind kind, const std::vector<double>& natural) {
  const auto tr = transforms(kind);
  if (natural.size() != tr.size() + 1) throw DomainError("wrong parameter count for " + to_string(kind));
  std::vector<double> out(natural.size());
  const double lam = natural[0];
  if (!(lam > kLambdaMin && lam < kLambdaMax)) throw DomainError("lambda outside (0.1, 20)");
  out[0] = logit((lam - kLambdaMin) / (kLambdaMax - kLambdaMin));
  for (std::size_t i = 0; i < tr.size(); ++i) {
    const double v = natural[i + 1];
    if (tr[i] == Transform::Log) {
      if (!(v > 0.0)) throw DomainError("parameter must be positive");
      out[i + 1] = std::log(v);
    } else {
      if (!(v > 0.0 && v < 1.0)) throw DomainError("parameter must lie in (0,1)");
      out[i + 1] = logit(v);
    }
  }
  return out;
}

std::vector<double> from_unconstrained(ModelKind kind, const std::vector<double>& free) {
  const auto tr = transforms(kind);
  if (free.size() != tr.size() + 1) throw DomainError("wrong parameter count for " + to_string(kind));
  std::vector<double> out(free.size());
  out[0] = kLambdaMin + (kLambdaMax - kLambdaMin) * sigmoid(free[0]);
  for (std::size_t i = 0; i < tr.size(); ++i)
    out[i + 1] = tr[i] == Transform::Log ? std::exp(free[i + 1]) : sigmoid(free[i + 1]);
  return out;
}

std::vector<std::vector<double>> default_starts(ModelKind kind) {
  switch (kind) {
    case ModelKind::ExpGa: return {{2.0, 0.5, 0.8}, {2.0, 0.3, 0.95}, {2.0, 0.7, 1.2}};
    case ModelKind::ExpInv:
    case ModelKind::ExpRect: return {{2.0, 0.5, 0.8}, {2.0, 0.3, 0.95}, {2.0, 0.7, 1.2}};
    case ModelKind::GaLog:
    case ModelKind::InvLog:
    case ModelKind::RectLog: return {{2.0, 0.5, 0.5, 0.5}, {2.0, 0.3, 0.3, 0.3}, {2.0, 0.7, 0.7, 0.7}};
    case ModelKind::MM: return {{2.0, 0.5}, {2.0, 0.9}, {2.0, 1.5}};
  }
  throw DomainError("unknown model kind");
}

}  // namespace geomdep
