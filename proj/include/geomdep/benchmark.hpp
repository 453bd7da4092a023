#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "geomdep/inference.hpp"
#include "geomdep/models.hpp"
#include "geomdep/synth.hpp"
#include "geomdep/threshold.hpp"
#include "json.hpp"

namespace geomdep {

struct BenchmarkConfig {
  std::size_t reps = 100;
  std::size_t n = 5000;
  double tau = 0.95;
  std::uint64_t seed = 1;
  std::vector<ModelKind> families{ModelKind::MM, ModelKind::ExpGa};
  // Scenario names to run (st.d.AD, ...); empty runs the whole catalog.
  std::vector<std::string> scenarios;
  unsigned threads = 1;
  ThresholdOptions threshold;
  OptimizerConfig optimizer;
};

struct RepOutcome {
  bool failed = false;
  bool correct = false;
  bool at_boundary = false;
  std::string label;  // "AD" or "AI"; empty when the fit failed
  std::string error;
  double fit_seconds = 0.0;
};

struct BenchmarkCell {
  std::string scenario;
  std::string structure;
  ModelKind family = ModelKind::MM;
  bool truth_ad = true;
  std::string metric;  // "sensitivity" or "specificity"
  std::size_t reps = 0;
  std::size_t failed = 0;
  std::size_t correct = 0;
  std::size_t boundary = 0;
  double rate = 0.0;      // correct / (reps - failed)
  double std_error = 0.0; // binomial
  double mean_fit_seconds = 0.0;
  std::vector<RepOutcome> outcomes;
};

struct BenchmarkReport {
  BenchmarkConfig config;
  std::vector<BenchmarkCell> cells;
  // Mean rate over cells, per family, in config.families order.
  std::vector<std::pair<ModelKind, double>> overall;
  double wall_seconds = 0.0;

  const BenchmarkCell& cell(const std::string& scenario, const std::string& structure, ModelKind family) const;
};

// Stream id for one replicate's data.
std::uint64_t benchmark_stream_id(const std::string& scenario, const std::string& structure, ModelKind family,
                                  std::size_t rep);

// One replicate: generate, threshold, fit, classify.
RepOutcome run_benchmark_rep(const Scenario& scenario, ModelKind family, std::size_t rep, const BenchmarkConfig& config);

BenchmarkReport run_benchmark(const BenchmarkConfig& config,
                              const std::function<void(std::size_t done, std::size_t total)>& progress = {});

// Timings are left out when include_timings is false so that reports compare byte for byte.
nlohmann::json to_json(const BenchmarkReport& report, bool include_timings = true);
std::string to_csv(const BenchmarkReport& report, bool include_timings = true);

}  // namespace geomdep
