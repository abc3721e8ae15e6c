#include "pipeplan/export.h"

#include <cstdio>
#include <ostream>

namespace pipeplan {
namespace {

bool any_built(const Matrix& built, int arc) {
  for (double b : built[arc]) {
    if (b > 0.5) return true;
  }
  return false;
}

int trend_of(const Matrix& built, int arc) {
  for (std::size_t c = 0; c < built[arc].size(); ++c) {
    if (built[arc][c] > 0.5) return static_cast<int>(c);
  }
  return -1;
}

double sum_row(const Matrix& m, int arc) {
  double s = 0.0;
  for (double v : m[arc]) s += v;
  return s;
}

nlohmann::ordered_json line(const PlanningInput& in, const RasterMap& frame,
                            int arc) {
  nlohmann::ordered_json coords = nlohmann::ordered_json::array();
  for (const Cell& c : in.graph.arcs[arc].polyline) {
    const Point p = frame.center(c);
    coords.push_back({p.x, p.y});
  }
  return {{"type", "LineString"}, {"coordinates", coords}};
}

nlohmann::ordered_json feature(const PlanningInput& in, const RasterMap& frame,
                               int arc, int period, const std::string& scenario,
                               int trend, double flow, std::string_view op) {
  const GraphArc& a = in.graph.arcs[arc];
  nlohmann::ordered_json props;
  props["period"] = period;
  props["scenario"] = scenario;
  props["from"] = in.graph.nodes[a.from].id;
  props["to"] = in.graph.nodes[a.to].id;
  props["length_km"] = a.length_km;
  props["trend"] = trend;
  props["flow"] = flow;
  props["upgrade_op"] = op;
  return {{"type", "Feature"}, {"properties", props},
          {"geometry", line(in, frame, arc)}};
}

nlohmann::ordered_json collection(nlohmann::ordered_json features) {
  return {{"type", "FeatureCollection"}, {"features", std::move(features)}};
}

std::string fixed3(double mio) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", round_report(mio) + 0.0);
  return buf;
}

}  // namespace

std::string_view upgrade_op(const FirstStageDecision& first,
                            const SecondStageDecision& second, int arc) {
  const bool existing = any_built(first.built, arc);
  if (existing && second.option[arc] == UpgradeOption::kPressureIncrease) {
    return "pressure_increase";
  }
  if (any_built(second.built, arc)) return existing ? "loop" : "new_line";
  return "none";
}

nlohmann::ordered_json period0_features(const PlanSolution& plan,
                                        const PlanningInput& in,
                                        const GridSpec& grid) {
  const RasterMap frame(grid);
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (int a = 0; a < in.graph.num_arcs(); ++a) {
    const int t = trend_of(plan.first.built, a);
    if (t < 0) continue;
    out.push_back(feature(in, frame, a, 0, in.scenarios.initial_id, t,
                          sum_row(plan.first.flow, a), "none"));
  }
  return collection(std::move(out));
}

nlohmann::ordered_json period1_features(const PlanSolution& plan,
                                        const ScenarioResult& scenario,
                                        const PlanningInput& in,
                                        const GridSpec& grid) {
  const RasterMap frame(grid);
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  const SecondStageDecision& d = scenario.decision;
  for (int a = 0; a < in.graph.num_arcs(); ++a) {
    const std::string_view op = upgrade_op(plan.first, d, a);
    if (op == "none") continue;
    const int t = op == "pressure_increase" ? trend_of(plan.first.built, a)
                                            : trend_of(d.built, a);
    out.push_back(feature(in, frame, a, 1, scenario.scenario, t,
                          d.total_flow[a], op));
  }
  return collection(std::move(out));
}

nlohmann::ordered_json node_features(const PlanningInput& in) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const GraphNode& n : in.graph.nodes) {
    nlohmann::ordered_json props;
    props["id"] = n.id;
    props["kind"] = to_string(n.kind);
    props["members"] = n.members;
    out.push_back({{"type", "Feature"},
                   {"properties", props},
                   {"geometry",
                    {{"type", "Point"},
                     {"coordinates", {n.location.x, n.location.y}}}}});
  }
  return collection(std::move(out));
}

void write_totals_csv(std::ostream& out, const RegretReport& report,
                      const std::string& config_hash) {
  out << "scenario,z_m1_mio_eur,z_m2_mio_eur,z_r_mio_eur,config_hash\n";
  for (const RegretRow& r : report.rows) {
    out << r.scenario << ',' << fixed3(r.z_m1) << ',' << fixed3(r.z_m2) << ','
        << fixed3(r.z_r) << ',' << config_hash << '\n';
  }
}

void write_differences_csv(std::ostream& out, const RegretReport& report,
                           const std::string& config_hash) {
  out << "scenario,potential_mio_eur,regret_mio_eur,benefit_mio_eur,"
         "config_hash\n";
  for (const RegretRow& r : report.rows) {
    out << r.scenario << ',' << fixed3(r.potential) << ',' << fixed3(r.regret)
        << ',' << fixed3(r.benefit) << ',' << config_hash << '\n';
  }
}

}  // namespace pipeplan
