#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "geomdep/gauge.hpp"

namespace geomdep {

struct ClassifierTolerances {
  double level = 1e-4;       // |k(q) - 1| below this counts as a unit-level contact
  double deriv = 1e-2;       // |k'| below this at a contact means a tangent
  double flat_level = 1e-9;  // stricter level used to detect flat segments
  int min_flat_cells = 3;
  double q_max = 5.0;
  double grid_step = 1e-3;
  double fd_step = 1e-5;
};

enum class PointKind { Isolated, FlatSegment };

struct IntersectionPoint {
  double q = 0.0;
  double q_end = 0.0;  // equals q except for flat segments
  double k_value = 1.0;
  double d_left = 0.0;   // k'(q-), NaN at q = 0
  double d_right = 0.0;  // k'(q+)
  PointKind kind = PointKind::Isolated;
  bool in_a = false;  // k decreasing into q
  bool in_b = false;  // k increasing out of q (q < 1)
};

struct IntersectionSet {
  std::vector<IntersectionPoint> k_points;
  std::vector<IntersectionPoint> k_tilde_points;
  double k_at_one = 1.0;
  double k_right_at_one = 0.0;        // k'(1+)
  double k_tilde_right_at_one = 0.0;  // k~'(1+)
};

enum class DependenceLabel { AD, AI };
enum class Mechanism { Pointy, FlatSegment, Tangent, DivergingB, Blunt };

std::string to_string(DependenceLabel label);
std::string to_string(Mechanism mechanism);

struct DependenceClass {
  DependenceLabel label = DependenceLabel::AI;
  Mechanism mechanism = Mechanism::Blunt;
  double chi_lower = 0.0;
  double chi_upper = 0.0;
  IntersectionSet intersections;
};

// Angular density weights b(q), b~(q) at the contact points; constant when absent.
struct BValues {
  std::function<double(double)> b;
  std::function<double(double)> b_tilde;
};

struct ClassifyOptions {
  ClassifierTolerances tol;
  std::optional<BValues> b_values;
  // Diagnostic only: exponent of an empirical angular density near the
  // endpoints, f_W(w) ~ w^exponent. Exponents in (-1, diverging_below) flag
  // AI through a diverging b when an endpoint is a contact point.
  std::optional<double> endpoint_density_exponent;
  double diverging_below = 0.0;
};

IntersectionSet find_intersections(const BoundaryFunctions& profile, const ClassifierTolerances& tol = {});

std::pair<double, double> chi_bounds(const IntersectionSet& set, const std::optional<BValues>& b_values = std::nullopt);

DependenceClass classify(GaugePtr g, const ClassifyOptions& options = {});

// 1 / min over the boundary {min(x,y) = 1} of g.
double estimate_eta(const Gauge& g);
// Slope of the ray on which the limit set touches the boundary y = 1.
double estimate_kappa(const Gauge& g);

}  // namespace geomdep
