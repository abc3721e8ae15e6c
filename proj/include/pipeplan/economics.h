// Cost aggregates, discounting, rest-value proration and the
// potential / regret / benefit report. Amounts are in EUR unless a name says
// Mio EUR.

#ifndef PIPEPLAN_ECONOMICS_H_
#define PIPEPLAN_ECONOMICS_H_

#include <optional>
#include <string>
#include <vector>

#include "pipeplan/cost_model.h"
#include "pipeplan/scenario.h"

namespace pipeplan {

// Sum over arcs a and trends c of (m_c * flow[a][c] + y_c * built[a][c]) * l_a.
double investment_cost(const std::vector<std::vector<double>>& flow,
                       const std::vector<std::vector<double>>& built,
                       const std::vector<Trend>& trends,
                       const std::vector<double>& lengths_km);

// Sum_{n=from}^{to} (1 + tau)^-n, inclusive; 0 when from > to.
double discount_sum(double tau, int from_year, int to_year);

// Sum_{n=from}^{to} OM * base / (1 + tau)^n.
double om_discounted(double base, double om, double tau, int from_year,
                     int to_year);

// I0 + O0 + (n2 - n1) / n2 * I1 + O1 + R
double scenario_total(double i0, double o0, double i1, double o1, double r,
                      int n1, int n2);

// Period-0 and period-1 aggregates of one plan under one scenario.
struct CostBreakdown {
  double i0 = 0.0;
  double o0 = 0.0;
  double i1 = 0.0;
  double r = 0.0;
  double o1 = 0.0;
  double total = 0.0;
  std::optional<double> best;    // B_s when known
  std::optional<double> regret;  // total - B_s when B_s is known
};

// Fills O0, O1 and total from I0, I1, R under the horizon's O&M rules.
CostBreakdown make_breakdown(double i0, double i1, double r,
                             const HorizonParams& h);

double to_mio(double eur);
// Rounded to 0.001 Mio EUR, the reporting precision.
double round_report(double mio_eur);

struct RegretRow {
  std::string scenario;
  double z_m1 = 0.0;  // Mio EUR
  double z_m2 = 0.0;
  double z_r = 0.0;
  double potential = 0.0;  // z_m2 - z_m1
  double regret = 0.0;     // z_r - z_m1
  double benefit = 0.0;    // z_m2 - z_r
};

struct RegretReport {
  std::vector<RegretRow> rows;
  double system_regret = 0.0;  // max regret over rows
};

struct ScenarioTotals {
  std::string scenario;
  double z_m1 = 0.0;
  double z_m2 = 0.0;
  double z_r = 0.0;
};

RegretReport regret_report(const std::vector<ScenarioTotals>& totals);

// Published values to compare a report against.
struct ReferenceRow {
  std::string scenario;
  std::optional<double> potential;
  std::optional<double> regret;
  std::optional<double> benefit;
};

struct Discrepancy {
  std::string scenario;
  std::string field;  // "potential", "regret" or "benefit"
  double computed = 0.0;
  double reference = 0.0;
};

// Fields whose computed value differs from the reference by more than
// `tolerance`. Scenarios missing from the report are ignored.
std::vector<Discrepancy> compare_with_reference(
    const RegretReport& report, const std::vector<ReferenceRow>& reference,
    double tolerance = 0.002);

}  // namespace pipeplan

#endif  // PIPEPLAN_ECONOMICS_H_
