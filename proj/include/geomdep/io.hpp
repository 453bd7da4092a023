#pragma once

#include <string>
#include <vector>

#include "geomdep/classifier.hpp"
#include "geomdep/inference.hpp"
#include "geomdep/tail_sim.hpp"
#include "geomdep/threshold.hpp"
#include "json.hpp"

namespace geomdep {

PointCloud read_points_csv(const std::string& path);
void write_points_csv(const std::string& path, const PointCloud& pts);

// Empirical ranks mapped to standard exponential margins: -log(1 - rank / (n + 1)).
PointCloud rank_transform_exponential(const PointCloud& pts);

ThresholdFunction read_threshold_csv(const std::string& path);
void write_threshold_csv(const std::string& path, const ThresholdFunction& thr);

nlohmann::json to_json(const FitResult& fit);
FitResult fit_from_json(const nlohmann::json& j);

nlohmann::json to_json(const DependenceClass& dc);
nlohmann::json to_json(const ThresholdFunction& thr);
ThresholdFunction threshold_from_json(const nlohmann::json& j);

// Values of +-inf and NaN are written as strings so the output stays valid JSON.
nlohmann::json number_or_string(double v);
double number_from_json(const nlohmann::json& j);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace geomdep
