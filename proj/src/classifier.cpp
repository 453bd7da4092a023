#include "geomdep/classifier.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <limits>

#include "geomdep/errors.hpp"

namespace geomdep {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using Derivative = std::function<std::optional<double>(double, int)>;

double side_derivative(const std::function<double(double)>& fn, const Derivative& exact, double q, int side,
                       const ClassifierTolerances& tol) {
  if (exact)
    if (const auto d = exact(q, side)) return *d;
  return one_sided_derivative(fn, q, side, tol.fd_step);
}

std::vector<IntersectionPoint> scan_side(const std::vector<double>& grid, const std::vector<double>& k,
                                         const std::function<double(double)>& fn, const Derivative& dfn,
                                         const ClassifierTolerances& tol) {
  std::vector<IntersectionPoint> points;
  // Only q in [0, 1] can touch the unit level: k(q) >= q.
  std::size_t last = 0;
  while (last + 1 < grid.size() && grid[last + 1] <= 1.0 + 1e-12) ++last;

  std::size_t i = 0;
  while (i <= last) {
    if (!(k[i] <= 1.0 + tol.level)) {
      ++i;
      continue;
    }
    std::size_t start = i;
    while (i + 1 <= last && k[i + 1] <= 1.0 + tol.level) ++i;
    const std::size_t end = i;
    ++i;

    // Longest stretch held at the unit level to within flat_level.
    std::size_t best_len = 0, best_from = start, run_from = start, run_len = 0;
    for (std::size_t j = start; j <= end; ++j) {
      if (std::fabs(k[j] - 1.0) <= tol.flat_level) {
        if (run_len == 0) run_from = j;
        ++run_len;
        if (run_len > best_len) {
          best_len = run_len;
          best_from = run_from;
        }
      } else {
        run_len = 0;
      }
    }
    IntersectionPoint pt;
    if (best_len >= static_cast<std::size_t>(tol.min_flat_cells) + 1) {
      pt.kind = PointKind::FlatSegment;
      pt.q = grid[best_from];
      pt.q_end = grid[best_from + best_len - 1];
      pt.k_value = k[best_from];
      pt.d_left = pt.q > 0.0 ? side_derivative(fn, dfn, pt.q, -1, tol) : kNaN;
      pt.d_right = side_derivative(fn, dfn, pt.q_end, +1, tol);
      points.push_back(pt);
      continue;
    }

    std::size_t arg = start;
    for (std::size_t j = start; j <= end; ++j)
      if (k[j] <= k[arg]) arg = j;
    double q = grid[arg];
    double value = k[arg];
    const double a = grid[arg == 0 ? 0 : arg - 1];
    const double b = std::min(grid[std::min(arg + 1, grid.size() - 1)], 1.0);
    if (b > a) {
      const auto refined = boost::math::tools::brent_find_minima(fn, a, b, 52);
      if (refined.second < value - 1e-12) {
        q = refined.first;
        value = refined.second;
      }
    }
    if (std::fabs(value - 1.0) > tol.level) continue;
    pt.kind = PointKind::Isolated;
    pt.q = pt.q_end = q;
    pt.k_value = value;
    pt.d_left = q > 0.0 ? side_derivative(fn, dfn, q, -1, tol) : kNaN;
    pt.d_right = side_derivative(fn, dfn, q, +1, tol);
    pt.in_a = q > 0.0 && pt.d_left < 0.0;
    pt.in_b = q < 1.0 && pt.d_right > 0.0;
    points.push_back(pt);
  }
  return points;
}

bool is_tangent(const IntersectionPoint& p, double tol_deriv) {
  if (p.kind != PointKind::Isolated) return false;
  if (p.q > 0.0 && std::fabs(p.d_left) < tol_deriv) return true;
  return std::fabs(p.d_right) < tol_deriv;
}

double side_sum(const std::vector<IntersectionPoint>& pts, const std::function<double(double)>& b, double d_one) {
  double s = 0.0;
  for (const auto& p : pts) {
    if (p.in_a) {
      if (p.d_left == 0.0) throw NumericError("chi bounds: zero left derivative at a contact point");
      s -= b(p.q) / p.d_left;
    }
    if (p.in_b) {
      if (p.d_right == 0.0) throw NumericError("chi bounds: zero right derivative at a contact point");
      s += b(p.q) / p.d_right;
    }
  }
  if (d_one == 0.0) throw NumericError("chi bounds: zero derivative at q = 1+");
  return s + b(1.0) / d_one;
}

}  // namespace

std::string to_string(DependenceLabel label) { return label == DependenceLabel::AD ? "AD" : "AI"; }

std::string to_string(Mechanism mechanism) {
  switch (mechanism) {
    case Mechanism::Pointy: return "pointy";
    case Mechanism::FlatSegment: return "flat-segment";
    case Mechanism::Tangent: return "tangent";
    case Mechanism::DivergingB: return "diverging-b";
    case Mechanism::Blunt: return "blunt";
  }
  return "unknown";
}

IntersectionSet find_intersections(const BoundaryFunctions& profile, const ClassifierTolerances& tol) {
  if (profile.grid.empty() || profile.grid.front() != 0.0)
    throw DomainError("find_intersections: grid must start at q = 0");
  if (!profile.k_fn || !profile.k_tilde_fn) throw DomainError("find_intersections: profile lacks evaluators");
  IntersectionSet out;
  out.k_points = scan_side(profile.grid, profile.k, profile.k_fn, profile.dk_fn, tol);
  out.k_tilde_points = scan_side(profile.grid, profile.k_tilde, profile.k_tilde_fn, profile.dk_tilde_fn, tol);
  out.k_at_one = profile.k_fn(1.0);
  out.k_right_at_one = side_derivative(profile.k_fn, profile.dk_fn, 1.0, +1, tol);
  out.k_tilde_right_at_one = side_derivative(profile.k_tilde_fn, profile.dk_tilde_fn, 1.0, +1, tol);
  return out;
}

std::pair<double, double> chi_bounds(const IntersectionSet& set, const std::optional<BValues>& b_values) {
  const auto unit = [](double) { return 1.0; };
  const std::function<double(double)> b = (b_values && b_values->b) ? b_values->b : unit;
  const std::function<double(double)> bt = (b_values && b_values->b_tilde) ? b_values->b_tilde : unit;
  for (const auto* side : {&set.k_points, &set.k_tilde_points})
    for (const auto& p : *side)
      if (p.kind == PointKind::FlatSegment) throw DomainError("chi bounds need a pointy limit set");
  const double s = side_sum(set.k_points, b, set.k_right_at_one);
  const double st = side_sum(set.k_tilde_points, bt, set.k_tilde_right_at_one);
  const double num = b(1.0) / set.k_right_at_one + bt(1.0) / set.k_tilde_right_at_one;
  const double lower = num / std::max(s, st);
  const double upper = num / std::min(s, st);
  return {std::clamp(lower, 0.0, 1.0), std::clamp(upper, 0.0, 1.0)};
}

DependenceClass classify(GaugePtr g, const ClassifyOptions& options) {
  if (!g) throw DomainError("classify: null gauge");
  const auto& tol = options.tol;
  DependenceClass out;
  const auto profile = boundary_profile(g, default_q_grid(tol.q_max, tol.grid_step));
  const double k1 = g->eval(1.0, 1.0);
  if (k1 > 1.0 + tol.level) {
    out.intersections.k_at_one = k1;
    out.label = DependenceLabel::AI;
    out.mechanism = Mechanism::Blunt;
    return out;
  }
  out.intersections = find_intersections(profile, tol);
  const auto& set = out.intersections;
  auto any = [&](auto pred) {
    return std::any_of(set.k_points.begin(), set.k_points.end(), pred) ||
           std::any_of(set.k_tilde_points.begin(), set.k_tilde_points.end(), pred);
  };
  out.label = DependenceLabel::AI;
  if (any([](const IntersectionPoint& p) { return p.kind == PointKind::FlatSegment; })) {
    out.mechanism = Mechanism::FlatSegment;
    return out;
  }
  if (any([&](const IntersectionPoint& p) { return is_tangent(p, tol.deriv); })) {
    out.mechanism = Mechanism::Tangent;
    return out;
  }
  if (options.endpoint_density_exponent) {
    const double e = *options.endpoint_density_exponent;
    const bool endpoint_contact = any([](const IntersectionPoint& p) { return p.q == 0.0; });
    if (endpoint_contact && e > -1.0 && e < options.diverging_below) {
      out.mechanism = Mechanism::DivergingB;
      return out;
    }
  }
  const auto [lo, hi] = chi_bounds(set, options.b_values);
  out.label = DependenceLabel::AD;
  out.mechanism = Mechanism::Pointy;
  out.chi_lower = lo;
  out.chi_upper = hi;
  return out;
}

double estimate_eta(const Gauge& g) {
  const double diag = g.eval(1.0, 1.0);
  if (!(diag > 1.0)) return 1.0 / diag;
  auto f = [&](double t) { return std::min(g.eval(1.0, t), g.eval(t, 1.0)); };
  const auto best = minimize_on_interval(f, 1.0, diag, 2001);
  return 1.0 / std::min(best.value, diag);
}

double estimate_kappa(const Gauge& g) {
  return minimize_on_interval([&](double z) { return g.eval(z, 1.0); }, 0.0, 1.0, 2001).argmin;
}

}  // namespace geomdep
