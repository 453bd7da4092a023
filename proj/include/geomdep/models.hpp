#pragma once

#include <string>
#include <vector>

#include "geomdep/gauge.hpp"

namespace geomdep {

// Parametric gauge models fitted by the inference module.
//   ExpGa/ExpInv/ExpRect: stochastic mixtures with Gaussian, inverted-logistic
//   and rectangular base; GaLog/InvLog/RectLog: additive mixtures with a
//   logistic second component; MM: the max-min gauge.
enum class ModelKind { ExpGa, ExpInv, ExpRect, GaLog, InvLog, RectLog, MM };

std::string to_string(ModelKind kind);  // lower-case CLI names
ModelKind parse_model_kind(const std::string& name);
const std::vector<ModelKind>& all_model_kinds();

// Gauge parameter names, without the gamma shape lambda.
std::vector<std::string> gauge_param_names(ModelKind kind);
std::size_t gauge_param_count(ModelKind kind);

// Throws DomainError when parameters fall outside the model's domain.
GaugePtr build_gauge(ModelKind kind, const std::vector<double>& gauge_params);

constexpr double kLambdaMin = 0.1;
constexpr double kLambdaMax = 20.0;

// Natural parameters are [lambda, gauge params...]. The unconstrained vector
// uses a scaled logit for lambda, log for positive-only parameters and logit
// for parameters in (0, 1).
std::vector<double> to_unconstrained(ModelKind kind, const std::vector<double>& natural);
std::vector<double> from_unconstrained(ModelKind kind, const std::vector<double>& free);

std::vector<std::vector<double>> default_starts(ModelKind kind);

}  // namespace geomdep
