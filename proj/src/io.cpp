#include "geomdep/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "geomdep/errors.hpp"

namespace geomdep {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  return out;
}

double parse_number(const std::string& text, const std::string& path, std::size_t line_no) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw DomainError(path + ":" + std::to_string(line_no) + ": cannot parse '" + text + "' as a number");
  }
}

// Reads a two-column CSV with the given header.
std::pair<std::vector<double>, std::vector<double>> read_two_columns(const std::string& path, const std::string& h1,
                                                                     const std::string& h2) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw DomainError(path + ": empty file");
  if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) line = line.substr(3);
  const auto header = split_csv_line(line);
  const auto c1 = std::find(header.begin(), header.end(), h1);
  const auto c2 = std::find(header.begin(), header.end(), h2);
  if (c1 == header.end() || c2 == header.end())
    throw DomainError(path + ": header must contain columns '" + h1 + "' and '" + h2 + "'");
  const auto i1 = static_cast<std::size_t>(c1 - header.begin());
  const auto i2 = static_cast<std::size_t>(c2 - header.begin());
  std::vector<double> a, b;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() <= std::max(i1, i2)) throw DomainError(path + ":" + std::to_string(line_no) + ": missing columns");
    a.push_back(parse_number(cells[i1], path, line_no));
    b.push_back(parse_number(cells[i2], path, line_no));
  }
  return {std::move(a), std::move(b)};
}

}  // namespace

PointCloud read_points_csv(const std::string& path) {
  auto [x, y] = read_two_columns(path, "x", "y");
  PointCloud pts{std::move(x), std::move(y)};
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (!(pts.x[i] >= 0.0) || !(pts.y[i] >= 0.0) || !std::isfinite(pts.x[i]) || !std::isfinite(pts.y[i]))
      throw DomainError(path + ": row " + std::to_string(i + 1) + " has a negative or non-finite coordinate");
  return pts;
}

void write_points_csv(const std::string& path, const PointCloud& pts) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write " + path);
  out.precision(17);
  out << "x,y\n";
  for (std::size_t i = 0; i < pts.size(); ++i) out << pts.x[i] << ',' << pts.y[i] << '\n';
  if (!out) throw DomainError("write failed for " + path);
}

PointCloud rank_transform_exponential(const PointCloud& pts) {
  auto transform = [](const std::vector<double>& v) {
    const std::size_t n = v.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> out(n);
    // Ties share their average rank.
    std::size_t i = 0;
    while (i < n) {
      std::size_t j = i;
      while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
      const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
      for (std::size_t k = i; k <= j; ++k) out[order[k]] = -std::log1p(-rank / static_cast<double>(n + 1));
      i = j + 1;
    }
    return out;
  };
  return {transform(pts.x), transform(pts.y)};
}

ThresholdFunction read_threshold_csv(const std::string& path) {
  auto [w, r] = read_two_columns(path, "w", "r_tau");
  return ThresholdFunction(std::move(w), std::move(r));
}

void write_threshold_csv(const std::string& path, const ThresholdFunction& thr) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write " + path);
  out.precision(17);
  out << "w,r_tau\n";
  for (std::size_t i = 0; i < thr.knots().size(); ++i) out << thr.knots()[i] << ',' << thr.values()[i] << '\n';
}

nlohmann::json number_or_string(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double number_from_json(const nlohmann::json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "nan") return std::nan("");
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  throw DomainError("expected a number in JSON input");
}

nlohmann::json to_json(const FitResult& fit) {
  nlohmann::json est = nlohmann::json::object();
  for (std::size_t i = 0; i < fit.names.size(); ++i) est[fit.names[i]] = fit.estimates[i];
  nlohmann::json j = {
      {"family", to_string(fit.family)},
      {"estimates", est},
      {"parameter_order", fit.names},
      {"nll", number_or_string(fit.nll)},
      {"aic", number_or_string(fit.aic)},
      {"converged", fit.converged},
      {"at_boundary", fit.at_boundary},
      {"iterations", fit.iterations},
      {"starts_converged", fit.starts_converged},
      {"n_exceed", fit.n_exceed},
      {"message", fit.message},
  };
  if (fit.standard_errors) {
    nlohmann::json se = nlohmann::json::object();
    for (std::size_t i = 0; i < fit.names.size(); ++i) se[fit.names[i]] = number_or_string((*fit.standard_errors)[i]);
    j["standard_errors"] = se;
  }
  return j;
}

FitResult fit_from_json(const nlohmann::json& j) {
  try {
    FitResult fit;
    fit.family = parse_model_kind(j.at("family").get<std::string>());
    fit.names = {"lambda"};
    for (const auto& n : gauge_param_names(fit.family)) fit.names.push_back(n);
    for (const auto& n : fit.names) fit.estimates.push_back(j.at("estimates").at(n).get<double>());
    fit.nll = j.contains("nll") ? number_from_json(j.at("nll")) : 0.0;
    fit.aic = j.contains("aic") ? number_from_json(j.at("aic")) : 0.0;
    fit.converged = j.value("converged", true);
    fit.at_boundary = j.value("at_boundary", false);
    fit.iterations = j.value("iterations", 0);
    fit.starts_converged = j.value("starts_converged", 0);
    fit.n_exceed = j.value("n_exceed", std::size_t{0});
    fit.message = j.value("message", std::string());
    if (j.contains("standard_errors")) {
      std::vector<double> se;
      for (const auto& n : fit.names) se.push_back(number_from_json(j.at("standard_errors").at(n)));
      fit.standard_errors = se;
    }
    return fit;
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed fit JSON: ") + e.what());
  }
}

nlohmann::json to_json(const DependenceClass& dc) {
  auto point_json = [](const IntersectionPoint& p) {
    std::string membership = p.kind == PointKind::FlatSegment ? "flat-segment" : "";
    if (p.kind == PointKind::Isolated) {
      if (p.in_a && p.in_b)
        membership = "A-endpoint,B-endpoint";
      else if (p.in_a)
        membership = "A-endpoint";
      else if (p.in_b)
        membership = "B-endpoint";
      else
        membership = "contact";
    }
    return nlohmann::json{{"q", p.q},
                          {"q_end", p.q_end},
                          {"k", p.k_value},
                          {"k_left", number_or_string(p.d_left)},
                          {"k_right", number_or_string(p.d_right)},
                          {"membership", membership}};
  };
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : dc.intersections.k_points) {
    auto j = point_json(p);
    j["side"] = "k";
    pts.push_back(j);
  }
  for (const auto& p : dc.intersections.k_tilde_points) {
    auto j = point_json(p);
    j["side"] = "k_tilde";
    pts.push_back(j);
  }
  nlohmann::json out = {{"label", to_string(dc.label)},
                        {"mechanism", to_string(dc.mechanism)},
                        {"k_at_one", dc.intersections.k_at_one},
                        {"intersections", pts}};
  if (dc.label == DependenceLabel::AD) {
    out["chi_lower"] = dc.chi_lower;
    out["chi_upper"] = dc.chi_upper;
  } else {
    out["chi_lower"] = 0.0;
    out["chi_upper"] = 0.0;
  }
  return out;
}

nlohmann::json to_json(const ThresholdFunction& thr) { return {{"knots", thr.knots()}, {"values", thr.values()}}; }

ThresholdFunction threshold_from_json(const nlohmann::json& j) {
  try {
    return ThresholdFunction(j.at("knots").get<std::vector<double>>(), j.at("values").get<std::vector<double>>());
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed threshold JSON: ") + e.what());
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write " + path);
  out << text;
  if (!out) throw DomainError("write failed for " + path);
}

}  // namespace geomdep
