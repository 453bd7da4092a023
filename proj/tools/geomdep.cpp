#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "geomdep/benchmark.hpp"
#include "geomdep/classifier.hpp"
#include "geomdep/errors.hpp"
#include "geomdep/inference.hpp"
#include "geomdep/io.hpp"
#include "geomdep/synth.hpp"
#include "geomdep/tail_sim.hpp"

namespace fs = std::filesystem;
using namespace geomdep;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;

struct Common {
  double tau = 0.95;
  std::uint64_t seed = 1;
  std::string out;
  bool ranks = false;
  std::size_t windows = 17;
  double overlap = 0.5;
  std::size_t min_per_window = 30;
};

struct GenArgs {
  std::string scenario, structure, generator;
  std::vector<double> params;
  std::size_t n = 5000;
};

struct FitArgs {
  std::string input;
  std::vector<std::string> families;
  bool standard_errors = false;
};

struct ClassifyArgs {
  std::string fit_json, model;
  std::vector<double> params;
};

struct BenchArgs {
  std::size_t reps = 100, n = 5000;
  unsigned threads = 1;
  std::vector<std::string> families, scenarios;
  bool no_timings = false;
};

struct LevelArgs {
  std::string fit_json, model;
  std::vector<double> params;
  std::size_t points = 1001;
};

struct SimArgs {
  std::string fit_json, data, threshold;
  std::size_t n_sim = 100000;
  std::vector<double> u{0.9, 0.95, 0.99, 0.995, 0.999, 0.9995, 0.9999};
  double x_lo = 0.0, x_hi = INFINITY, y_lo = 0.0, y_hi = INFINITY;
};

ThresholdOptions threshold_options(const Common& c) {
  ThresholdOptions o;
  o.n_windows = c.windows;
  o.overlap = c.overlap;
  o.min_per_window = c.min_per_window;
  return o;
}

// Writes to the --out path, or stdout when it is empty.
void emit(const std::string& path, const std::string& text) {
  if (path.empty())
    std::cout << text;
  else
    write_text_file(path, text);
}

std::string with_suffix(const std::string& path, const std::string& suffix) {
  fs::path p(path);
  p.replace_extension(suffix);
  return p.string();
}

PointCloud load_points(const std::string& path, bool ranks) {
  auto pts = read_points_csv(path);
  return ranks ? rank_transform_exponential(pts) : pts;
}

GaugePtr gauge_from_args(const std::string& fit_json, const std::string& model, const std::vector<double>& params) {
  if (!fit_json.empty()) return fitted_gauge(fit_from_json(nlohmann::json::parse(read_text_file(fit_json))));
  if (model.empty()) throw DomainError("give either --fit or --model with --param");
  auto one = [&](const char* name) {
    if (params.size() != 1) throw DomainError(std::string(name) + " takes one --param");
    return params[0];
  };
  if (model == "logistic") return make_logistic(one("logistic"));
  if (model == "gaussian") return make_gaussian(one("gaussian"));
  if (model == "invlogistic") return make_inverted_logistic(one("invlogistic"));
  if (model == "rectangular") return make_rectangular(one("rectangular"));
  const ModelKind kind = parse_model_kind(model);
  if (params.size() != gauge_param_count(kind))
    throw DomainError(model + " takes " + std::to_string(gauge_param_count(kind)) + " --param values");
  return build_gauge(kind, params);
}

int cmd_gen(const Common& c, const GenArgs& a) {
  GeneratorSpec spec;
  nlohmann::json sidecar;
  std::string stream_label;
  if (!a.scenario.empty()) {
    if (a.structure.empty()) throw DomainError("--scenario needs --structure");
    const Scenario& s = find_scenario(a.scenario, a.structure);
    spec = s.generator;
    sidecar["scenario"] = s.name;
    sidecar["structure"] = s.structure;
    sidecar["truth"] = {{"class", s.asymptotically_dependent ? "AD" : "AI"}, {"chi", s.chi}, {"eta", s.eta}};
    stream_label = s.name + '\x1f' + s.structure;
  } else {
    if (a.generator.empty()) throw DomainError("give --scenario/--structure or --generator");
    spec.kind = parse_generator_kind(a.generator);
    if (a.params.empty()) throw DomainError("--generator needs --param");
    spec.a = a.params[0];
    spec.b = a.params.size() > 1 ? a.params[1] : 0.0;
    stream_label = a.generator;
  }
  if (a.n == 0) throw DomainError("--n must be positive");
  const std::uint64_t stream = fnv1a64(stream_label.data(), stream_label.size());
  RngStream rng(c.seed, stream);
  const auto pts = generate(spec, a.n, rng);

  sidecar["generator"] = to_string(spec.kind);
  sidecar["params"] = spec.kind == GeneratorKind::Dirichlet ? nlohmann::json{spec.a, spec.b} : nlohmann::json{spec.a};
  sidecar["seed"] = c.seed;
  sidecar["stream_id"] = stream;
  sidecar["n"] = a.n;
  if (c.out.empty()) {
    std::ostringstream os;
    os.precision(17);
    os << "x,y\n";
    for (std::size_t i = 0; i < pts.size(); ++i) os << pts.x[i] << ',' << pts.y[i] << '\n';
    std::cout << os.str();
    std::cerr << sidecar.dump(2) << '\n';
  } else {
    write_points_csv(c.out, pts);
    write_text_file(c.out + ".json", sidecar.dump(2) + "\n");
  }
  return 0;
}

int cmd_fit(const Common& c, const FitArgs& a) {
  const auto pts = load_points(a.input, c.ranks);
  const auto sample = to_angular(pts);
  const auto thr = rolling_quantile_threshold(sample, c.tau, threshold_options(c));
  const auto exc = make_exceedances(sample, thr);
  std::vector<std::string> families = a.families.empty() ? std::vector<std::string>{"mm"} : a.families;
  OptimizerConfig opt;
  opt.standard_errors = a.standard_errors;

  struct Row {
    std::string family;
    double aic;
    bool ok;
    std::string note;
  };
  std::vector<Row> rows;
  nlohmann::json all = nlohmann::json::array();
  if (!c.out.empty()) {
    fs::create_directories(c.out);
    write_threshold_csv((fs::path(c.out) / "threshold.csv").string(), thr);
  }
  for (const auto& name : families) {
    const ModelKind kind = parse_model_kind(name);
    try {
      const auto fr = fit(exc, kind, std::nullopt, opt);
      auto j = to_json(fr);
      j["tau"] = c.tau;
      j["threshold"] = to_json(thr);
      all.push_back(j);
      if (!c.out.empty()) write_text_file((fs::path(c.out) / ("fit_" + name + ".json")).string(), j.dump(2) + "\n");
      rows.push_back({name, fr.aic, fr.converged, fr.message});
      if (!fr.converged) std::cerr << name << ": " << fr.message << '\n';
    } catch (const NumericError& e) {
      // Non-convergence is reported per family; the run continues.
      std::cerr << name << ": " << e.what() << '\n';
      rows.push_back({name, INFINITY, false, e.what()});
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const Row& x, const Row& y) { return x.aic < y.aic; });
  std::ostringstream table;
  table.precision(10);
  table << "rank,family,aic,converged\n";
  for (std::size_t i = 0; i < rows.size(); ++i)
    table << i + 1 << ',' << rows[i].family << ',' << rows[i].aic << ',' << (rows[i].ok ? "true" : "false") << '\n';
  if (c.out.empty()) {
    std::cout << (all.size() == 1 ? all[0] : all).dump(2) << '\n';
    std::cerr << table.str();
  } else {
    write_text_file((fs::path(c.out) / "aic.csv").string(), table.str());
    std::cout << table.str();
  }
  return 0;
}

int cmd_classify(const Common& c, const ClassifyArgs& a) {
  const auto g = gauge_from_args(a.fit_json, a.model, a.params);
  const auto dc = classify(g);
  emit(c.out, to_json(dc).dump(2) + "\n");
  return 0;
}

int cmd_benchmark(const Common& c, const BenchArgs& a) {
  BenchmarkConfig cfg;
  cfg.reps = a.reps;
  cfg.n = a.n;
  cfg.tau = c.tau;
  cfg.seed = c.seed;
  cfg.threads = a.threads;
  cfg.scenarios = a.scenarios;
  cfg.threshold = threshold_options(c);
  if (!a.families.empty()) {
    cfg.families.clear();
    for (const auto& f : a.families) cfg.families.push_back(parse_model_kind(f));
  }
  const auto report = run_benchmark(cfg, [](std::size_t done, std::size_t total) {
    if (done % 50 == 0 || done == total) std::cerr << "\r" << done << "/" << total << std::flush;
  });
  std::cerr << '\n';
  const bool timings = !a.no_timings;
  const std::string json = to_json(report, timings).dump(2) + "\n";
  const std::string csv = to_csv(report, timings);
  if (c.out.empty()) {
    std::cout << csv;
  } else {
    write_text_file(with_suffix(c.out, ".json"), json);
    write_text_file(with_suffix(c.out, ".csv"), csv);
    std::cout << csv;
  }
  for (const auto& cell : report.cells)
    for (std::size_t r = 0; r < cell.outcomes.size(); ++r) {
      const auto& o = cell.outcomes[r];
      if (o.failed)
        std::cerr << cell.scenario << '/' << cell.structure << '/' << to_string(cell.family) << " rep " << r
                  << " failed: " << o.error << '\n';
      else if (o.at_boundary)
        std::cerr << cell.scenario << '/' << cell.structure << '/' << to_string(cell.family) << " rep " << r
                  << " at parameter boundary, classified " << o.label << '\n';
    }
  return 0;
}

int cmd_levelset(const Common& c, const LevelArgs& a) {
  const auto g = gauge_from_args(a.fit_json, a.model, a.params);
  const auto pts = unit_level_set(*g, a.points);
  std::ostringstream os;
  os.precision(17);
  os << "w,x,y\n";
  for (const auto& p : pts) os << p.w << ',' << p.x << ',' << p.y << '\n';
  emit(c.out, os.str());
  return 0;
}

FittedModel model_from_args(const Common& c, const SimArgs& a) {
  if (a.fit_json.empty() || a.data.empty()) throw DomainError("--fit and --data are required");
  const auto j = nlohmann::json::parse(read_text_file(a.fit_json));
  const auto fr = fit_from_json(j);
  const auto sample = to_angular(load_points(a.data, c.ranks));
  ThresholdFunction thr;
  if (!a.threshold.empty())
    thr = read_threshold_csv(a.threshold);
  else if (j.contains("threshold"))
    thr = threshold_from_json(j.at("threshold"));
  else
    thr = rolling_quantile_threshold(sample, c.tau, threshold_options(c));
  return make_fitted_model(fitted_gauge(fr), fr.lambda(), thr, sample);
}

int cmd_chiplot(const Common& c, const SimArgs& a) {
  const auto model = model_from_args(c, a);
  std::ostringstream os;
  os.precision(10);
  os << "u,chi_m_hat,mc_se,note\n";
  for (std::size_t i = 0; i < a.u.size(); ++i) {
    // Each u draws from its own stream so rows do not depend on the grid.
    RngStream rng(c.seed, 0x6368690000000000ULL + i);
    try {
      const auto est = estimate_chi_m(model, a.u[i], a.n_sim, rng);
      os << a.u[i] << ',' << est.chi << ',' << est.std_error << ",\n";
    } catch (const std::exception& e) {
      os << a.u[i] << ",nan,nan,\"" << e.what() << "\"\n";
    }
  }
  emit(c.out, os.str());
  return 0;
}

int cmd_prob(const Common& c, const SimArgs& a) {
  const auto model = model_from_args(c, a);
  RngStream rng(c.seed, 0x70726f6200000000ULL);
  const auto est = estimate_region_prob(model, {a.x_lo, a.x_hi, a.y_lo, a.y_hi}, a.n_sim, rng);
  const nlohmann::json j = {{"probability", est.probability}, {"std_error", est.std_error}, {"k", est.k},
                            {"mean_weight", est.mean_weight}, {"hits", est.hits},           {"n_sim", est.n_sim}};
  emit(c.out, j.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Geometric extremal dependence: generation, fitting, classification and benchmarks"};
  app.set_config("--config", "", "TOML or INI file with option values; flags given on the command line win");
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--tau", common.tau, "Threshold quantile level")->capture_default_str();
    sub->add_option("--seed", common.seed, "Master seed")->capture_default_str();
    sub->add_option("--out", common.out, "Output path");
    sub->add_flag("--ranks", common.ranks, "Rank-transform input columns to exponential margins");
    sub->add_option("--windows", common.windows, "Number of threshold windows")->capture_default_str();
    sub->add_option("--overlap", common.overlap, "Overlap fraction of neighbouring windows")->capture_default_str();
    sub->add_option("--min-per-window", common.min_per_window, "Minimum points per window")->capture_default_str();
  };

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic dataset (CSV plus JSON sidecar)");
  add_common(gen_cmd);
  gen_cmd->add_option("--scenario", gen.scenario, "st.d.AD, mst.d.AD, w.d.AD, st.d.AI or w.d.AI");
  gen_cmd->add_option("--structure", gen.structure, "logistic, dirichlet, invlogistic or gaussian");
  gen_cmd->add_option("--generator", gen.generator, "Generator name, used instead of a scenario");
  gen_cmd->add_option("--param", gen.params, "Generator parameter(s)");
  gen_cmd->add_option("--n", gen.n, "Sample size")->capture_default_str();

  FitArgs fit_args;
  auto* fit_cmd = app.add_subcommand("fit", "Fit truncated-gamma gauge models to a CSV of (x,y)");
  add_common(fit_cmd);
  fit_cmd->add_option("--in", fit_args.input, "Input CSV with header x,y")->required();
  fit_cmd->add_option("--family", fit_args.families, "expga|expinv|exprect|galog|invlog|rectlog|mm (repeatable)");
  fit_cmd->add_flag("--se", fit_args.standard_errors, "Report Hessian standard errors");

  ClassifyArgs cls;
  auto* cls_cmd = app.add_subcommand("classify", "Classify a fitted or given gauge as AD or AI");
  add_common(cls_cmd);
  cls_cmd->add_option("--fit", cls.fit_json, "Fit JSON written by the fit command");
  cls_cmd->add_option("--model", cls.model, "Model or gauge name, used with --param");
  cls_cmd->add_option("--param", cls.params, "Gauge parameters");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("benchmark", "Run the sensitivity/specificity simulation study");
  add_common(bench_cmd);
  bench_cmd->add_option("--reps", bench.reps, "Replicates per cell")->capture_default_str();
  bench_cmd->add_option("--n", bench.n, "Sample size per replicate")->capture_default_str();
  bench_cmd->add_option("--threads", bench.threads, "Worker threads")->capture_default_str();
  bench_cmd->add_option("--family", bench.families, "Model families (repeatable; default mm and expga)");
  bench_cmd->add_option("--scenario", bench.scenarios, "Scenario names (repeatable; default all)");
  bench_cmd->add_flag("--no-timings", bench.no_timings, "Leave timings out of the report");

  LevelArgs lvl;
  auto* lvl_cmd = app.add_subcommand("levelset", "Write the unit level set as (w,x,y) rows");
  add_common(lvl_cmd);
  lvl_cmd->add_option("--fit", lvl.fit_json, "Fit JSON");
  lvl_cmd->add_option("--model", lvl.model, "Model or gauge name, used with --param");
  lvl_cmd->add_option("--param", lvl.params, "Gauge parameters");
  lvl_cmd->add_option("--points", lvl.points, "Number of angles")->capture_default_str();

  SimArgs chi;
  auto* chi_cmd = app.add_subcommand("chiplot", "Model-based chi_m(u) over a grid of u");
  add_common(chi_cmd);
  chi_cmd->add_option("--fit", chi.fit_json, "Fit JSON")->required();
  chi_cmd->add_option("--data", chi.data, "Data CSV the fit came from")->required();
  chi_cmd->add_option("--threshold", chi.threshold, "Threshold knots CSV (w,r_tau)");
  chi_cmd->add_option("--nsim", chi.n_sim, "Conditional simulations per u")->capture_default_str();
  chi_cmd->add_option("--u", chi.u, "Probability levels");

  SimArgs prob;
  auto* prob_cmd = app.add_subcommand("prob", "Probability of a rectangle in the joint tail");
  add_common(prob_cmd);
  prob_cmd->add_option("--fit", prob.fit_json, "Fit JSON")->required();
  prob_cmd->add_option("--data", prob.data, "Data CSV the fit came from")->required();
  prob_cmd->add_option("--threshold", prob.threshold, "Threshold knots CSV (w,r_tau)");
  prob_cmd->add_option("--nsim", prob.n_sim, "Conditional simulations")->capture_default_str();
  prob_cmd->add_option("--x-lo", prob.x_lo, "Lower x bound");
  prob_cmd->add_option("--x-hi", prob.x_hi, "Upper x bound");
  prob_cmd->add_option("--y-lo", prob.y_lo, "Lower y bound");
  prob_cmd->add_option("--y-hi", prob.y_hi, "Upper y bound");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*gen_cmd) return cmd_gen(common, gen);
    if (*fit_cmd) return cmd_fit(common, fit_args);
    if (*cls_cmd) return cmd_classify(common, cls);
    if (*bench_cmd) return cmd_benchmark(common, bench);
    if (*lvl_cmd) return cmd_levelset(common, lvl);
    if (*chi_cmd) return cmd_chiplot(common, chi);
    if (*prob_cmd) return cmd_prob(common, prob);
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const DomainError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitValidation;
  } catch (const InsufficientData& e) {
    std::cerr << "insufficient data: " << e.what() << '\n';
    return kExitValidation;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "invalid JSON: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return 0;
}
