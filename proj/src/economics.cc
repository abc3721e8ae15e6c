#include "pipeplan/economics.h"

#include <algorithm>
#include <cmath>

namespace pipeplan {

double investment_cost(const std::vector<std::vector<double>>& flow,
                       const std::vector<std::vector<double>>& built,
                       const std::vector<Trend>& trends,
                       const std::vector<double>& lengths_km) {
  double sum = 0.0;
  for (std::size_t a = 0; a < lengths_km.size(); ++a) {
    double per_km = 0.0;
    for (std::size_t c = 0; c < trends.size(); ++c) {
      per_km += trends[c].slope * flow[a][c] + trends[c].intercept * built[a][c];
    }
    sum += per_km * lengths_km[a];
  }
  return sum;
}

double discount_sum(double tau, int from_year, int to_year) {
  double sum = 0.0;
  for (int n = from_year; n <= to_year; ++n) sum += std::pow(1.0 + tau, -n);
  return sum;
}

double om_discounted(double base, double om, double tau, int from_year,
                     int to_year) {
  return om * base * discount_sum(tau, from_year, to_year);
}

double scenario_total(double i0, double o0, double i1, double o1, double r,
                      int n1, int n2) {
  const double proration =
      static_cast<double>(n2 - n1) / static_cast<double>(n2);
  return i0 + o0 + proration * i1 + o1 + r;
}

CostBreakdown make_breakdown(double i0, double i1, double r,
                             const HorizonParams& h) {
  CostBreakdown b;
  b.i0 = i0;
  b.i1 = i1;
  b.r = r;
  b.o0 = om_discounted(i0, h.om, h.tau, 1, h.n1);
  b.o1 = om_discounted(i0 + i1 + r, h.om, h.tau, h.o1_first_year(), h.n2);
  b.total = scenario_total(b.i0, b.o0, b.i1, b.o1, b.r, h.n1, h.n2);
  return b;
}

double to_mio(double eur) { return eur * 1e-6; }

double round_report(double mio_eur) {
  return std::round(mio_eur * 1000.0) / 1000.0;
}

RegretReport regret_report(const std::vector<ScenarioTotals>& totals) {
  RegretReport report;
  for (const ScenarioTotals& t : totals) {
    RegretRow row;
    row.scenario = t.scenario;
    row.z_m1 = t.z_m1;
    row.z_m2 = t.z_m2;
    row.z_r = t.z_r;
    row.potential = t.z_m2 - t.z_m1;
    row.regret = t.z_r - t.z_m1;
    row.benefit = t.z_m2 - t.z_r;
    report.system_regret =
        report.rows.empty() ? row.regret
                            : std::max(report.system_regret, row.regret);
    report.rows.push_back(row);
  }
  return report;
}

std::vector<Discrepancy> compare_with_reference(
    const RegretReport& report, const std::vector<ReferenceRow>& reference,
    double tolerance) {
  std::vector<Discrepancy> out;
  for (const ReferenceRow& ref : reference) {
    const auto it = std::find_if(
        report.rows.begin(), report.rows.end(),
        [&](const RegretRow& r) { return r.scenario == ref.scenario; });
    if (it == report.rows.end()) continue;
    auto check = [&](const char* field, double computed,
                     const std::optional<double>& expected) {
      if (expected && std::abs(computed - *expected) > tolerance) {
        out.push_back({ref.scenario, field, computed, *expected});
      }
    };
    check("potential", it->potential, ref.potential);
    check("regret", it->regret, ref.regret);
    check("benefit", it->benefit, ref.benefit);
  }
  return out;
}

}  // namespace pipeplan
