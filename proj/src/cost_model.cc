#include "pipeplan/cost_model.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "pipeplan/errors.h"

namespace pipeplan {
namespace {

// v * pi * 0.25 * rho: mass flow [kg/s] of a pipe with D = 1 m.
double unit_diameter_flow(const HydraulicParams& h) {
  return h.velocity_m_s * std::numbers::pi * 0.25 * h.density_kg_m3;
}

double chord_slope(double a, double fa, double b, double fb) {
  return (fb - fa) / (b - a);
}

// Max over [a, b] of (f - chord) / f for the secant through (a, f(a)) and
// (b, f(b)). The deviation of a secant of a concave curve is unimodal, so a
// coarse scan followed by golden-section search on the best bracket is exact
// to well below the tolerances in use.
double secant_error(double a, double b, const CostParams& cp,
                    const HydraulicParams& h) {
  if (b <= a) return 0.0;
  const double fa = unit_cost_from_flow(a, h, cp);
  const double fb = unit_cost_from_flow(b, h, cp);
  const double m = chord_slope(a, fa, b, fb);
  auto rel = [&](double x) {
    const double f = unit_cost_from_flow(x, h, cp);
    return (f - (fa + m * (x - a))) / f;
  };

  constexpr int kScan = 64;
  int best = 0;
  double best_val = -1.0;
  for (int i = 0; i <= kScan; ++i) {
    const double x = a + (b - a) * i / kScan;
    const double v = rel(x);
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  double lo = a + (b - a) * std::max(0, best - 1) / kScan;
  double hi = a + (b - a) * std::min(kScan, best + 1) / kScan;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double v1 = rel(x1);
  double v2 = rel(x2);
  for (int it = 0; it < 80; ++it) {
    if (v1 < v2) {
      lo = x1;
      x1 = x2;
      v1 = v2;
      x2 = lo + inv_phi * (hi - lo);
      v2 = rel(x2);
    } else {
      hi = x2;
      x2 = x1;
      v2 = v1;
      x1 = hi - inv_phi * (hi - lo);
      v1 = rel(x1);
    }
  }
  return std::max({best_val, v1, v2, 0.0});
}

// Largest b in (a, max_flow] whose secant from a stays within `err`.
double furthest_reach(double a, double max_flow, double err,
                      const CostParams& cp, const HydraulicParams& h) {
  if (secant_error(a, max_flow, cp, h) <= err) return max_flow;
  double lo = a;
  double hi = max_flow;
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (secant_error(a, mid, cp, h) <= err) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

// Greedy left-to-right partition under a max relative error; optimal in the
// number of pieces because a sub-interval secant never deviates more.
std::vector<double> greedy_breakpoints(double max_flow, double err,
                                       int piece_limit, const CostParams& cp,
                                       const HydraulicParams& h) {
  std::vector<double> points{0.0};
  while (points.back() < max_flow &&
         static_cast<int>(points.size()) <= piece_limit) {
    const double next = furthest_reach(points.back(), max_flow, err, cp, h);
    if (next <= points.back()) break;
    points.push_back(next);
  }
  return points;
}

Trend secant(int index, double a, double b, const CostParams& cp,
             const HydraulicParams& h) {
  const double fa = unit_cost_from_flow(a, h, cp);
  const double fb = unit_cost_from_flow(b, h, cp);
  Trend t;
  t.index = index;
  t.slope = chord_slope(a, fa, b, fb);
  t.intercept = fa - t.slope * a;
  t.q_min = a;
  t.q_max = b;
  return t;
}

}  // namespace

void HydraulicParams::validate() const {
  if (!(density_kg_m3 > 0.0) || !std::isfinite(density_kg_m3) ||
      !(velocity_m_s > 0.0) || !std::isfinite(velocity_m_s)) {
    throw ValidationError("hydraulics: density and velocity must be > 0");
  }
}

void CostParams::validate() const {
  if (!(c1 >= 0.0) || !(c2 >= 0.0) || !(c3 > 0.0) || !std::isfinite(c1) ||
      !std::isfinite(c2) || !std::isfinite(c3)) {
    throw ValidationError("cost: need c1 >= 0, c2 >= 0, c3 > 0");
  }
}

double diameter_from_flow(double mass_flow_kg_s, const HydraulicParams& h) {
  if (mass_flow_kg_s < 0.0 || std::isnan(mass_flow_kg_s)) {
    throw DomainError("diameter_from_flow: negative flow " +
                      std::to_string(mass_flow_kg_s));
  }
  return std::sqrt(mass_flow_kg_s / unit_diameter_flow(h));
}

double flow_from_diameter(double diameter_m, const HydraulicParams& h) {
  if (diameter_m < 0.0) {
    throw DomainError("flow_from_diameter: negative diameter");
  }
  return diameter_m * diameter_m * unit_diameter_flow(h);
}

double cost_per_meter_from_diameter(double diameter_m, const CostParams& cp) {
  return cp.c1 * diameter_m * diameter_m + cp.c2 * diameter_m + cp.c3;
}

double unit_cost_from_flow(double flow_mt_per_year, const HydraulicParams& h,
                           const CostParams& cp) {
  if (flow_mt_per_year < 0.0 || std::isnan(flow_mt_per_year)) {
    throw DomainError("unit_cost_from_flow: negative flow");
  }
  const double area_term =
      mt_per_year_to_kg_per_s(flow_mt_per_year) / unit_diameter_flow(h);
  return 1000.0 * (area_term * cp.c1 + std::sqrt(area_term) * cp.c2 + cp.c3);
}

TrendFit fit_trends(const CostParams& cp, const HydraulicParams& h,
                    double max_flow, int count, double tolerance) {
  if (count < 1) throw ParameterError("fit_trends: trend count must be >= 1");
  if (!(max_flow > 0.0) || !std::isfinite(max_flow)) {
    throw ParameterError("fit_trends: max flow must be > 0");
  }
  if (!(tolerance > 0.0)) {
    throw ParameterError("fit_trends: tolerance must be > 0");
  }
  cp.validate();
  h.validate();

  // Smallest achievable max error with `count` pieces, by bisection on the
  // error level (piece count needed is monotone in it).
  double lo = 0.0;
  double hi = secant_error(0.0, max_flow, cp, h);
  if (count > 1) {
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      const auto pts = greedy_breakpoints(max_flow, mid, count, cp, h);
      const bool fits = pts.back() >= max_flow &&
                        static_cast<int>(pts.size()) - 1 <= count;
      if (fits) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
  }

  std::vector<double> points = greedy_breakpoints(max_flow, hi, count, cp, h);
  points.back() = max_flow;
  // Pad to exactly `count` pieces by halving the worst piece.
  while (static_cast<int>(points.size()) - 1 < count) {
    std::size_t worst = 0;
    double worst_err = -1.0;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
      const double e = secant_error(points[i], points[i + 1], cp, h);
      if (e > worst_err) {
        worst_err = e;
        worst = i;
      }
    }
    points.insert(points.begin() + worst + 1,
                  0.5 * (points[worst] + points[worst + 1]));
  }

  TrendFit fit;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    fit.trends.push_back(
        secant(static_cast<int>(i), points[i], points[i + 1], cp, h));
    fit.max_relative_error =
        std::max(fit.max_relative_error,
                 secant_error(points[i], points[i + 1], cp, h));
  }
  fit.tolerance_met = fit.max_relative_error <= tolerance;
  return fit;
}

double trend_relative_error(const Trend& trend, const CostParams& cp,
                            const HydraulicParams& h) {
  // Exact secants deviate one-sidedly; a pinned table may not, so take both
  // signs.
  const double a = trend.q_min;
  const double b = trend.q_max;
  double worst = 0.0;
  constexpr int kSamples = 2048;
  for (int i = 0; i <= kSamples; ++i) {
    const double x = a + (b - a) * i / kSamples;
    const double f = unit_cost_from_flow(x, h, cp);
    worst = std::max(worst, std::abs(trend.value(x) - f) / f);
  }
  return worst;
}

void validate_trends(const std::vector<Trend>& trends) {
  if (trends.empty()) throw ValidationError("trend table is empty");
  for (std::size_t i = 0; i < trends.size(); ++i) {
    const Trend& t = trends[i];
    if (!(t.q_min >= 0.0) || !(t.q_min < t.q_max) || !std::isfinite(t.q_max)) {
      throw ValidationError("trend " + std::to_string(i) +
                            ": need 0 <= q_min < q_max");
    }
    if (!(t.slope >= 0.0) || !(t.intercept >= 0.0)) {
      throw ValidationError("trend " + std::to_string(i) +
                            ": slope and intercept must be >= 0");
    }
    if (i > 0 && trends[i - 1].q_max > t.q_min + 1e-9 * t.q_max) {
      throw ValidationError("trend windows overlap at index " +
                            std::to_string(i));
    }
  }
}

double arc_capex(double flow, bool built, const Trend& trend,
                 double length_km) {
  if (!built && flow > 0.0) {
    throw ValidationError("arc_capex: flow on an arc that is not built");
  }
  return (trend.slope * flow + trend.intercept * (built ? 1.0 : 0.0)) *
         length_km;
}

void to_json(nlohmann::json& j, const Trend& t) {
  j = nlohmann::json{{"index", t.index},
                     {"slope", t.slope},
                     {"intercept", t.intercept},
                     {"q_min", t.q_min},
                     {"q_max", t.q_max}};
}

void from_json(const nlohmann::json& j, Trend& t) {
  t.index = j.value("index", 0);
  j.at("slope").get_to(t.slope);
  j.at("intercept").get_to(t.intercept);
  j.at("q_min").get_to(t.q_min);
  j.at("q_max").get_to(t.q_max);
}

void to_json(nlohmann::json& j, const HydraulicParams& h) {
  j = nlohmann::json{{"density", h.density_kg_m3},
                     {"velocity", h.velocity_m_s}};
}

void from_json(const nlohmann::json& j, HydraulicParams& h) {
  h.density_kg_m3 = j.value("density", 900.0);
  h.velocity_m_s = j.value("velocity", 3.0);
}

void to_json(nlohmann::json& j, const CostParams& cp) {
  j = nlohmann::json{{"c1", cp.c1},
                     {"c2", cp.c2},
                     {"c3", cp.c3},
                     {"price_year", cp.price_year}};
}

void from_json(const nlohmann::json& j, CostParams& cp) {
  const CostParams defaults;
  cp.c1 = j.value("c1", defaults.c1);
  cp.c2 = j.value("c2", defaults.c2);
  cp.c3 = j.value("c3", defaults.c3);
  cp.price_year = j.value("price_year", defaults.price_year);
}

}  // namespace pipeplan
