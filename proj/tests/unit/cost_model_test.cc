#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "pipeplan/cost_model.h"
#include "pipeplan/errors.h"

namespace pipeplan {
namespace {

// Cost constants with a larger fixed per-metre term, for which three secants
// stay within 2 %.
CostParams steep_fixed() {
  CostParams cp;
  cp.c3 = 829.5;
  return cp;
}

// Exact curve computed independently: D from continuity, cost per metre
// quadratic in D, per km.
double curve(double mt_per_year, const HydraulicParams& h, const CostParams& cp) {
  const double kg_s = mt_per_year * 1e9 / (365.0 * 86400.0);
  const double d = std::sqrt(4.0 * kg_s / (std::numbers::pi * h.density_kg_m3 *
                                           h.velocity_m_s));
  return 1000.0 * (cp.c1 * d * d + cp.c2 * d + cp.c3);
}

TEST(Hydraulics, UnitDiameterFlow) {
  EXPECT_NEAR(diameter_from_flow(2120.575, {}), 1.0, 1e-6);
  EXPECT_EQ(diameter_from_flow(0.0, {}), 0.0);
}

TEST(Hydraulics, InversionRoundTrip) {
  const HydraulicParams h{800.0, 2.0};
  for (double d : {0.1, 0.45, 1.2}) {
    EXPECT_NEAR(diameter_from_flow(flow_from_diameter(d, h), h), d, 1e-12);
  }
}

TEST(Hydraulics, NegativeFlowIsDomainError) {
  EXPECT_THROW(diameter_from_flow(-1.0, {}), DomainError);
  EXPECT_THROW(unit_cost_from_flow(-0.1, {}, {}), DomainError);
  EXPECT_THROW(flow_from_diameter(-0.1, {}), DomainError);
}

TEST(Hydraulics, InvalidParametersRejected) {
  EXPECT_THROW((HydraulicParams{0.0, 3.0}.validate()), ValidationError);
  CostParams cp;
  cp.c3 = 0.0;
  EXPECT_THROW(cp.validate(), ValidationError);
}

TEST(Hydraulics, UnitConversion) {
  EXPECT_NEAR(mt_per_year_to_kg_per_s(1.0), 31.709791983764585, 1e-12);
  EXPECT_NEAR(kg_per_s_to_mt_per_year(mt_per_year_to_kg_per_s(7.3)), 7.3, 1e-12);
}

TEST(CostCurve, CompositionMatchesIndependentCurve) {
  std::mt19937 g(4);
  std::uniform_real_distribution<double> q(0.0, 40.0);
  const HydraulicParams h;
  const CostParams cp;
  for (int i = 0; i < 100; ++i) {
    const double f = q(g);
    const double via_d = 1000.0 * cost_per_meter_from_diameter(
                                      diameter_from_flow(mt_per_year_to_kg_per_s(f), h), cp);
    const double direct = unit_cost_from_flow(f, h, cp);
    EXPECT_NEAR(direct, via_d, 1e-9 * via_d);
    EXPECT_NEAR(direct, curve(f, h, cp), 1e-9 * via_d);
  }
}

TEST(TrendFit, ThreePiecesWithinTwoPercent) {
  const CostParams cp = steep_fixed();
  const HydraulicParams h;
  const TrendFit fit = fit_trends(cp, h, 30.0, 3, 0.02);
  ASSERT_EQ(fit.trends.size(), 3u);
  EXPECT_TRUE(fit.tolerance_met);
  EXPECT_LE(fit.max_relative_error, 0.02);
  EXPECT_EQ(fit.trends.front().q_min, 0.0);
  EXPECT_EQ(fit.trends.back().q_max, 30.0);
  for (std::size_t i = 1; i < fit.trends.size(); ++i) {
    EXPECT_EQ(fit.trends[i].q_min, fit.trends[i - 1].q_max);
    EXPECT_LT(fit.trends[i].slope, fit.trends[i - 1].slope);
  }
  EXPECT_NO_THROW(validate_trends(fit.trends));
}

TEST(TrendFit, ChordsStayBelowCurve) {
  const CostParams cp = steep_fixed();
  const HydraulicParams h;
  const TrendFit fit = fit_trends(cp, h, 30.0, 3, 0.02);
  for (const Trend& t : fit.trends) {
    for (int i = 0; i <= 200; ++i) {
      const double x = t.q_min + (t.q_max - t.q_min) * i / 200.0;
      const double f = curve(x, h, cp);
      EXPECT_LE(t.value(x), f * (1 + 1e-12));
      EXPECT_LE((f - t.value(x)) / f, fit.max_relative_error + 1e-9);
    }
    EXPECT_NEAR(t.value(t.q_min), curve(t.q_min, h, cp), 1e-6);
    EXPECT_NEAR(t.value(t.q_max), curve(t.q_max, h, cp), 1e-6);
  }
}

TEST(TrendFit, MorePiecesNeverWorse) {
  double last = 1.0;
  for (int k = 1; k <= 5; ++k) {
    const double e = fit_trends({}, {}, 25.0, k, 0.02).max_relative_error;
    EXPECT_LE(e, last + 1e-12);
    last = e;
  }
}

TEST(TrendFit, DefaultsFlagMissedTolerance) {
  const TrendFit fit = fit_trends({}, {}, 30.0, 3, 0.02);
  EXPECT_EQ(fit.trends.size(), 3u);
  EXPECT_FALSE(fit.tolerance_met);
  EXPECT_GT(fit.max_relative_error, 0.02);
}

TEST(TrendFit, ReportedErrorMatchesSampling) {
  const CostParams cp = steep_fixed();
  const TrendFit fit = fit_trends(cp, {}, 30.0, 3, 0.02);
  double worst = 0.0;
  for (const Trend& t : fit.trends) {
    worst = std::max(worst, trend_relative_error(t, cp, {}));
  }
  EXPECT_NEAR(worst, fit.max_relative_error, 1e-6);
}

TEST(TrendFit, BadArgumentsAreParameterErrors) {
  EXPECT_THROW(fit_trends({}, {}, 30.0, 0, 0.02), ParameterError);
  EXPECT_THROW(fit_trends({}, {}, 0.0, 3, 0.02), ParameterError);
  EXPECT_THROW(fit_trends({}, {}, 30.0, 3, 0.0), ParameterError);
}

TEST(TrendTable, Validation) {
  EXPECT_THROW(validate_trends({}), ValidationError);
  EXPECT_THROW(validate_trends({{0, 1.0, 1.0, 2.0, 1.0}}), ValidationError);
  EXPECT_THROW(validate_trends({{0, 1.0, 1.0, 0.0, 5.0}, {1, 1.0, 1.0, 4.0, 9.0}}),
               ValidationError);
  EXPECT_NO_THROW(validate_trends({{0, 2.0, 1.0, 0.0, 5.0}, {1, 1.0, 6.0, 5.0, 9.0}}));
}

TEST(TrendTable, ArcCapex) {
  const Trend t{0, 1000.0, 5000.0, 0.0, 10.0};
  EXPECT_DOUBLE_EQ(arc_capex(2.0, true, t, 3.0), (2000.0 + 5000.0) * 3.0);
  EXPECT_DOUBLE_EQ(arc_capex(0.0, false, t, 3.0), 0.0);
  EXPECT_THROW(arc_capex(1.0, false, t, 3.0), ValidationError);
}

TEST(TrendTable, JsonRoundTrip) {
  const Trend t{2, 1.5, 2.5, 3.0, 4.0};
  const Trend back = nlohmann::json(t).get<Trend>();
  EXPECT_EQ(back.index, 2);
  EXPECT_EQ(back.slope, 1.5);
  EXPECT_EQ(back.q_max, 4.0);
  const CostParams cp = nlohmann::json{{"c3", 10.0}}.get<CostParams>();
  EXPECT_EQ(cp.c3, 10.0);
  EXPECT_EQ(cp.c1, CostParams{}.c1);
}

}  // namespace
}  // namespace pipeplan
