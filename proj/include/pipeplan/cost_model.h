// Pipeline hydraulics and capital cost.
//
// Flows are expressed in Mt/a at the public surface and converted to kg/s
// for the diameter relation D = sqrt(F / (v * pi/4 * rho)). The exact capex
// per unit length, cost(D) = C1*D^2 + C2*D + C3, is concave in the flow and
// is approximated by secant "trends" for the mixed-integer models.

#ifndef PIPEPLAN_COST_MODEL_H_
#define PIPEPLAN_COST_MODEL_H_

#include <vector>

#include "json.hpp"

namespace pipeplan {

// 1 Mt/a expressed in kg/s (365-day year).
inline constexpr double kKgPerSecondPerMtPerYear = 1e9 / (365.0 * 24.0 * 3600.0);

inline double mt_per_year_to_kg_per_s(double mt_per_year) {
  return mt_per_year * kKgPerSecondPerMtPerYear;
}
inline double kg_per_s_to_mt_per_year(double kg_per_s) {
  return kg_per_s / kKgPerSecondPerMtPerYear;
}

struct HydraulicParams {
  double density_kg_m3 = 900.0;
  double velocity_m_s = 3.0;

  void validate() const;
};

// Cost constants of cost(D) per metre of pipeline, D in metres:
// c1 [EUR/(m*m^2)], c2 [EUR/(m*m)], c3 [EUR/m].
//
// Defaults are the per-mile material, labour, miscellaneous and right-of-way
// coefficients of the Parker (2004) correlation (year-2000 USD, D in inches),
// converted to metres and multiplied by 1.9 for escalation to 2022 EUR.
struct CostParams {
  double c1 = 1232.5;
  double c2 = 546.4;
  double c3 = 276.5;
  int price_year = 2022;

  void validate() const;
};

// Inner diameter [m] for a mass flow [kg/s]. Throws DomainError for F < 0.
double diameter_from_flow(double mass_flow_kg_s, const HydraulicParams& h);

// Mass flow [kg/s] that fills a pipe of inner diameter d [m].
double flow_from_diameter(double diameter_m, const HydraulicParams& h);

// cost(D) per metre [EUR/m].
double cost_per_meter_from_diameter(double diameter_m, const CostParams& cp);

// Exact (non-linearised) capex per kilometre [EUR/km] for a flow in Mt/a.
double unit_cost_from_flow(double flow_mt_per_year, const HydraulicParams& h,
                           const CostParams& cp);

// One secant piece of the cost approximation: capex per km is
// slope * flow + intercept inside [q_min, q_max] (Mt/a).
struct Trend {
  int index = 0;
  double slope = 0.0;      // EUR per (Mt/a * km)
  double intercept = 0.0;  // EUR per km
  double q_min = 0.0;      // Mt/a
  double q_max = 0.0;      // Mt/a

  double value(double flow) const { return slope * flow + intercept; }
};

struct TrendFit {
  std::vector<Trend> trends;
  double max_relative_error = 0.0;
  bool tolerance_met = false;
};

// Fits `count` contiguous secants of the exact curve over [0, max_flow].
// Breakpoints minimise the largest relative deviation; when that minimum
// still exceeds `tolerance` the best fit is returned with tolerance_met
// cleared.
TrendFit fit_trends(const CostParams& cp, const HydraulicParams& h,
                    double max_flow, int count, double tolerance);

// Largest relative deviation of one secant from the exact curve on its
// window, evaluated by dense sampling plus golden-section refinement.
double trend_relative_error(const Trend& trend, const CostParams& cp,
                            const HydraulicParams& h);

// Validates trend ordering and window tiling; throws ValidationError.
void validate_trends(const std::vector<Trend>& trends);

// Capex [EUR] of one arc built with `trend`: (m_c*flow + y_c*built) * length.
double arc_capex(double flow, bool built, const Trend& trend, double length_km);

void to_json(nlohmann::json& j, const Trend& t);
void from_json(const nlohmann::json& j, Trend& t);
void to_json(nlohmann::json& j, const HydraulicParams& h);
void from_json(const nlohmann::json& j, HydraulicParams& h);
void to_json(nlohmann::json& j, const CostParams& cp);
void from_json(const nlohmann::json& j, CostParams& cp);

}  // namespace pipeplan

#endif  // PIPEPLAN_COST_MODEL_H_
