#include "pipeplan/planning.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

#include "pipeplan/errors.h"

namespace pipeplan {
namespace {

using milp::LinearExpr;
using milp::Sense;

constexpr double kMio = 1e-6;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string arc_name(const PlanningInput& in, int a) {
  const GraphArc& arc = in.graph.arcs[a];
  return in.graph.nodes[arc.from].id + "_" + in.graph.nodes[arc.to].id;
}

double top_capacity(const std::vector<Trend>& trends) {
  double q = 0.0;
  for (const Trend& t : trends) q = std::max(q, t.q_max);
  return q;
}

// Node balance rows: outflow - inflow >= d, equality where d == 0.
void add_balance(milp::Model& m, const PlanningInput& in,
                 const std::vector<double>& demand,
                 const std::vector<LinearExpr>& arc_flow,
                 const std::string& tag) {
  std::vector<LinearExpr> net(in.graph.num_nodes());
  for (int a = 0; a < in.graph.num_arcs(); ++a) {
    net[in.graph.arcs[a].from] += arc_flow[a];
    net[in.graph.arcs[a].to] -= arc_flow[a];
  }
  for (int j = 0; j < in.graph.num_nodes(); ++j) {
    const Sense sense = demand[j] == 0.0 ? Sense::kEqual : Sense::kGreaterEqual;
    m.add_constraint("bal" + tag + "_" + in.graph.nodes[j].id, net[j], sense,
                     demand[j]);
  }
}

// Trend windows and single-trend rows for one block of (b, p) variables.
void add_trend_block(milp::Model& m, const PlanningInput& in,
                     std::vector<std::vector<int>>& b,
                     std::vector<std::vector<int>>& p,
                     const std::string& tag) {
  const int na = in.graph.num_arcs();
  const int nc = static_cast<int>(in.trends.size());
  b.assign(na, std::vector<int>(nc));
  p.assign(na, std::vector<int>(nc));
  for (int a = 0; a < na; ++a) {
    const std::string an = arc_name(in, a);
    LinearExpr one;
    for (int c = 0; c < nc; ++c) {
      const Trend& t = in.trends[c];
      const std::string suffix = tag + "_" + an + "_" + std::to_string(c);
      b[a][c] = m.add_binary("b" + suffix);
      p[a][c] = m.add_variable("p" + suffix, 0.0, t.q_max);
      m.add_constraint("qmax" + suffix,
                       LinearExpr::variable(p[a][c]) -
                           t.q_max * LinearExpr::variable(b[a][c]),
                       Sense::kLessEqual, 0.0);
      if (t.q_min > 0.0) {
        m.add_constraint("qmin" + suffix,
                         LinearExpr::variable(p[a][c]) -
                             t.q_min * LinearExpr::variable(b[a][c]),
                         Sense::kGreaterEqual, 0.0);
      }
      one.add(b[a][c], 1.0);
    }
    m.add_constraint("one" + tag + "_" + an, one, Sense::kLessEqual, 1.0);
  }
}

// Capex of one arc in Mio EUR.
LinearExpr arc_capex_expr(const PlanningInput& in, int a,
                          const std::vector<int>& b, const std::vector<int>& p) {
  const double l = in.graph.arcs[a].length_km;
  LinearExpr e;
  for (std::size_t c = 0; c < in.trends.size(); ++c) {
    e.add(p[c], in.trends[c].slope * l * kMio);
    e.add(b[c], in.trends[c].intercept * l * kMio);
  }
  return e;
}

double clean(double v) { return std::abs(v) < 1e-12 ? 0.0 : v; }

// Binary rounded, flow clipped into its trend window.
void clean_block(const PlanningInput& in, const std::vector<double>& x,
                 const std::vector<std::vector<int>>& b,
                 const std::vector<std::vector<int>>& p, Matrix& built,
                 Matrix& flow) {
  const int na = static_cast<int>(b.size());
  const int nc = static_cast<int>(in.trends.size());
  built.assign(na, std::vector<double>(nc, 0.0));
  flow.assign(na, std::vector<double>(nc, 0.0));
  for (int a = 0; a < na; ++a) {
    for (int c = 0; c < nc; ++c) {
      built[a][c] = std::round(x[b[a][c]]);
      if (built[a][c] > 0.5) {
        flow[a][c] = std::clamp(clean(x[p[a][c]]), in.trends[c].q_min,
                                in.trends[c].q_max);
      }
    }
  }
}

FirstStageDecision extract_first(const PlanningInput& in, const PlanModel& pm,
                                 const std::vector<double>& x) {
  FirstStageDecision d;
  clean_block(in, x, pm.first.b, pm.first.p, d.built, d.flow);
  return d;
}

SecondStageDecision extract_second(const PlanningInput& in,
                                   const SecondStageVars& sv,
                                   const std::vector<double>& x) {
  SecondStageDecision d;
  clean_block(in, x, sv.b, sv.p, d.built, d.flow);
  const int na = in.graph.num_arcs();
  d.option.resize(na);
  d.total_flow.resize(na);
  d.restructure.resize(na);
  for (int a = 0; a < na; ++a) {
    d.option[a] = x[sv.u2[a]] > 0.5 ? UpgradeOption::kPressureIncrease
                                    : UpgradeOption::kLoop;
    d.total_flow[a] = std::max(0.0, clean(x[sv.f[a]]));
    d.restructure[a] = std::max(0.0, clean(x[sv.r[a]])) / kMio;
  }
  return d;
}

milp::SolveResult run_model(const PlanModel& pm, const SolverConfig& cfg,
                            const std::string& scenario,
                            const std::string& what) {
  auto solver = milp::make_solver(cfg.backend);
  milp::SolveResult r = milp::solve_model(*solver, pm.model, cfg.options,
                                          pm.hint);
  if (r.status == milp::SolveStatus::kInfeasible) {
    throw InfeasibleError(what + " is infeasible for scenario " + scenario,
                          scenario);
  }
  if (!r.has_solution()) {
    throw SolverLimitError(what + " for scenario " + scenario +
                           " stopped on a limit without a feasible plan");
  }
  return r;
}

void stamp(PlanSolution& sol, const milp::SolveResult& r) {
  sol.status = std::string(milp::to_string(r.status));
  sol.gap = r.gap;
  sol.nodes += r.nodes;
  sol.seconds += r.seconds;
}

// Fixes every first-stage variable to the decision's values.
void fix_first_stage(PlanModel& pm, const FirstStageDecision& first) {
  for (std::size_t a = 0; a < pm.first.b.size(); ++a) {
    for (std::size_t c = 0; c < pm.first.b[a].size(); ++c) {
      pm.model.set_bounds(pm.first.b[a][c], first.built[a][c],
                          first.built[a][c]);
      pm.model.set_bounds(pm.first.p[a][c], first.flow[a][c],
                          first.flow[a][c]);
    }
  }
}

void check_shape(const PlanningInput& in, const FirstStageDecision& first) {
  const std::size_t nc = in.trends.size();
  if (first.built.size() != static_cast<std::size_t>(in.graph.num_arcs()) ||
      first.flow.size() != first.built.size()) {
    throw ParameterError("plan has " + std::to_string(first.built.size()) +
                         " arcs, model has " +
                         std::to_string(in.graph.num_arcs()));
  }
  for (std::size_t a = 0; a < first.built.size(); ++a) {
    if (first.built[a].size() != nc || first.flow[a].size() != nc) {
      throw ParameterError("plan trend count does not match the model");
    }
  }
}

ScenarioResult make_result(const PlanningInput& in,
                           const FirstStageDecision& first, int s,
                           SecondStageDecision second) {
  ScenarioResult r;
  r.scenario = in.scenarios.scenarios[s].id;
  r.cost = recompute_breakdown(in, first, second);
  r.decision = std::move(second);
  return r;
}

}  // namespace

void PlanningInput::validate() const {
  graph.validate();
  validate_trends(trends);
  horizon.validate();
  if (scenarios.period0.size() != static_cast<std::size_t>(graph.num_nodes())) {
    throw ValidationError("scenario tables do not match the graph");
  }
  for (const Scenario& s : scenarios.scenarios) {
    if (s.period1.size() != scenarios.period0.size()) {
      throw ValidationError("scenario " + s.id + " does not match the graph");
    }
  }
  if (scenarios.initial_index() < 0) {
    throw ValidationError("initial scenario missing");
  }
}

std::vector<double> PlanningInput::arc_lengths() const {
  std::vector<double> l;
  for (const GraphArc& a : graph.arcs) l.push_back(a.length_km);
  return l;
}

const ScenarioResult* PlanSolution::find(const std::string& scenario) const {
  for (const ScenarioResult& r : scenarios) {
    if (r.scenario == scenario) return &r;
  }
  return nullptr;
}

PlanModel build_first_stage(const PlanningInput& in) {
  in.validate();
  PlanModel pm;
  add_trend_block(pm.model, in, pm.first.b, pm.first.p, "0");
  // First-stage choices decide most of the recourse; branch on them first.
  for (const auto& row : pm.first.b) {
    for (int v : row) pm.model.set_priority(v, 1);
  }
  const int na = in.graph.num_arcs();
  std::vector<LinearExpr> arc_flow(na);
  for (int a = 0; a < na; ++a) {
    for (int v : pm.first.p[a]) arc_flow[a].add(v, 1.0);
    pm.i0_arc.push_back(arc_capex_expr(in, a, pm.first.b[a], pm.first.p[a]));
    pm.i0 += pm.i0_arc.back();
  }
  add_balance(pm.model, in, in.scenarios.period0, arc_flow, "0");
  const HorizonParams& h = in.horizon;
  pm.o0 = (h.om * discount_sum(h.tau, 1, h.n1)) * pm.i0;
  return pm;
}

void build_second_stage(PlanModel& pm, const PlanningInput& in,
                        const std::vector<int>& scenarios) {
  const int na = in.graph.num_arcs();
  const HorizonParams& h = in.horizon;
  const double q_top = top_capacity(in.trends);
  const double f_max = std::max(2.0, h.o2_max) * q_top;
  const Sense coupling = in.relaxed_coupling ? Sense::kLessEqual : Sense::kEqual;
  milp::Model& m = pm.model;
  for (int s : scenarios) {
    const Scenario& sc = in.scenarios.scenarios.at(s);
    SecondStageVars sv;
    sv.scenario = s;
    sv.id = sc.id;
    const std::string tag = "_" + sc.id;
    add_trend_block(m, in, sv.b, sv.p, "1" + tag);
    std::vector<LinearExpr> arc_flow(na);
    for (int a = 0; a < na; ++a) {
      const std::string an = tag + "_" + arc_name(in, a);
      sv.u1.push_back(m.add_binary("u1" + an));
      sv.u2.push_back(m.add_binary("u2" + an));
      sv.f.push_back(m.add_variable("f" + an, 0.0, f_max));
      double r_max = 0.0;
      for (const Trend& t : in.trends) {
        r_max = std::max(r_max, t.slope * t.q_max + t.intercept);
      }
      r_max *= h.o2_cost * in.graph.arcs[a].length_km * kMio;
      sv.r.push_back(m.add_variable("r" + an, 0.0, r_max));
      m.add_constraint("opt" + an,
                       LinearExpr::variable(sv.u1[a]) +
                           LinearExpr::variable(sv.u2[a]),
                       Sense::kEqual, 1.0);

      LinearExpr base;  // sum_c p (period 0)
      for (int v : pm.first.p[a]) base.add(v, 1.0);
      LinearExpr loop = LinearExpr::variable(sv.f[a]) - base;
      for (int v : sv.p[a]) loop.add(v, -1.0);
      m.add_indicator("loop" + an, sv.u1[a], loop, coupling, 0.0);
      m.add_indicator("press" + an, sv.u2[a],
                      LinearExpr::variable(sv.f[a]) - h.o2_max * base,
                      coupling, 0.0);
      m.add_indicator("rcost" + an, sv.u2[a],
                      LinearExpr::variable(sv.r[a]) - h.o2_cost * pm.i0_arc[a],
                      Sense::kEqual, 0.0);

      // Redundant rows valid under either option. They tie f and r to the
      // capacity and cost of the plan while u is still fractional.
      LinearExpr cap = LinearExpr::variable(sv.f[a]) - base;
      for (int v : sv.p[a]) cap.add(v, -1.0);
      m.add_constraint("cap" + an, cap - (h.o2_max - 1.0) * base,
                       Sense::kLessEqual, 0.0);
      m.add_constraint("capu" + an,
                       cap - ((h.o2_max - 1.0) * q_top) *
                                 LinearExpr::variable(sv.u2[a]),
                       Sense::kLessEqual, 0.0);
      m.add_constraint("rmin" + an,
                       LinearExpr::variable(sv.r[a]) -
                           h.o2_cost * pm.i0_arc[a] -
                           r_max * LinearExpr::variable(sv.u2[a]),
                       Sense::kGreaterEqual, -r_max);

      arc_flow[a] = LinearExpr::variable(sv.f[a]);
      sv.i1 += arc_capex_expr(in, a, sv.b[a], sv.p[a]);
      sv.r_sum.add(sv.r[a], 1.0);
    }
    add_balance(m, in, sc.period1, arc_flow, "1" + tag);
    sv.o1 = (h.om * discount_sum(h.tau, h.o1_first_year(), h.n2)) *
            (pm.i0 + sv.i1 + sv.r_sum);
    sv.total = pm.i0 + pm.o0 + h.proration() * sv.i1 + sv.o1 + sv.r_sum;
    pm.second.push_back(std::move(sv));
  }
}

void warm_start(const PlanSolution& plan, PlanModel& pm) {
  if (plan.first.empty()) return;
  const std::size_t na = pm.first.b.size();
  const std::size_t nc = na ? pm.first.b[0].size() : 0;
  if (plan.first.built.size() != na || plan.first.flow.size() != na) {
    throw ParameterError("warm start plan has " +
                         std::to_string(plan.first.built.size()) +
                         " arcs, model has " + std::to_string(na));
  }
  for (std::size_t a = 0; a < na; ++a) {
    if (plan.first.built[a].size() != nc || plan.first.flow[a].size() != nc) {
      throw ParameterError("warm start plan trend count does not match");
    }
  }
  pm.hint.assign(pm.model.num_variables(), kNaN);
  for (std::size_t a = 0; a < na; ++a) {
    for (std::size_t c = 0; c < nc; ++c) {
      pm.hint[pm.first.b[a][c]] = plan.first.built[a][c];
      pm.hint[pm.first.p[a][c]] = plan.first.flow[a][c];
    }
  }
  for (const SecondStageVars& sv : pm.second) {
    const ScenarioResult* sr = nullptr;
    for (const ScenarioResult& r : plan.scenarios) {
      if (r.scenario == sv.id && r.decision.option.size() == na) {
        sr = &r;
      }
    }
    if (!sr) continue;
    const SecondStageDecision& d = sr->decision;
    for (std::size_t a = 0; a < na; ++a) {
      const bool press = d.option[a] == UpgradeOption::kPressureIncrease;
      pm.hint[sv.u1[a]] = press ? 0.0 : 1.0;
      pm.hint[sv.u2[a]] = press ? 1.0 : 0.0;
      pm.hint[sv.f[a]] = d.total_flow[a];
      pm.hint[sv.r[a]] = d.restructure[a] * kMio;
      for (std::size_t c = 0; c < nc; ++c) {
        pm.hint[sv.b[a][c]] = d.built[a][c];
        pm.hint[sv.p[a][c]] = d.flow[a][c];
      }
    }
  }
}

PlanSolution solve_m1(const PlanningInput& in, int s, const SolverConfig& cfg,
                      const PlanSolution* hint) {
  PlanModel pm = build_first_stage(in);
  const std::string& id = in.scenarios.scenarios.at(s).id;
  build_second_stage(pm, in, {s});
  pm.model.set_objective(pm.second[0].total);
  if (hint) warm_start(*hint, pm);
  const milp::SolveResult r = run_model(pm, cfg, id, "perfect-information model");

  PlanSolution sol;
  sol.model = "m1";
  stamp(sol, r);
  sol.first = extract_first(in, pm, r.values);
  sol.scenarios.push_back(
      make_result(in, sol.first, s, extract_second(in, pm.second[0], r.values)));
  sol.objective = r.objective / kMio;
  return sol;
}

PlanSolution evaluate_first_stage(const PlanningInput& in,
                                  const FirstStageDecision& first, int s,
                                  const SolverConfig& cfg) {
  check_shape(in, first);
  PlanModel pm = build_first_stage(in);
  const std::string& id = in.scenarios.scenarios.at(s).id;
  fix_first_stage(pm, first);
  build_second_stage(pm, in, {s});
  pm.model.set_objective(pm.second[0].total);
  const milp::SolveResult r = run_model(pm, cfg, id, "recourse model");

  PlanSolution sol;
  sol.model = "recourse";
  stamp(sol, r);
  sol.first = first;
  sol.scenarios.push_back(
      make_result(in, first, s, extract_second(in, pm.second[0], r.values)));
  sol.objective = r.objective / kMio;
  return sol;
}

PlanSolution solve_m2(const PlanningInput& in, int s, const SolverConfig& cfg) {
  const std::string& id = in.scenarios.scenarios.at(s).id;
  PlanModel pm = build_first_stage(in);
  pm.model.set_objective(pm.i0);
  const milp::SolveResult r1 =
      run_model(pm, cfg, in.scenarios.initial_id, "successive model step 1");
  const FirstStageDecision first = extract_first(in, pm, r1.values);

  PlanSolution step2;
  try {
    step2 = evaluate_first_stage(in, first, s, cfg);
  } catch (const InfeasibleError&) {
    throw InfeasibleError(
        "successive model step 2 is infeasible for scenario " + id +
            ": the period-0 network cannot be upgraded to its demand",
        id);
  }
  PlanSolution sol = std::move(step2);
  sol.model = "m2";
  sol.nodes += r1.nodes;
  sol.seconds += r1.seconds;
  sol.step1_i0 = investment_cost(first.flow, first.built, in.trends,
                                 in.arc_lengths());
  return sol;
}

PlanSolution solve_min_max_regret(const PlanningInput& in,
                                  const std::map<std::string, double>& best,
                                  const SolverConfig& cfg,
                                  const PlanSolution* hint) {
  const int ns = in.scenarios.num_scenarios();
  std::vector<double> bs(ns);
  for (int s = 0; s < ns; ++s) {
    const std::string& id = in.scenarios.scenarios[s].id;
    auto it = best.find(id);
    if (it == best.end()) {
      throw ParameterError("no best solution value for scenario " + id);
    }
    if (!std::isfinite(it->second)) {
      throw ParameterError("best solution value for scenario " + id +
                           " is not finite");
    }
    bs[s] = it->second;
  }

  PlanModel pm = build_first_stage(in);
  std::vector<int> all(ns);
  for (int s = 0; s < ns; ++s) all[s] = s;
  build_second_stage(pm, in, all);
  const int x = pm.model.add_variable("regret", 0.0, milp::kInfinity);
  for (int s = 0; s < ns; ++s) {
    pm.model.add_constraint("regret_" + in.scenarios.scenarios[s].id,
                            pm.second[s].total - LinearExpr::variable(x),
                            Sense::kLessEqual, bs[s] * kMio);
  }
  pm.model.set_objective(LinearExpr::variable(x));
  if (hint) warm_start(*hint, pm);
  if (!pm.hint.empty()) pm.hint.resize(pm.model.num_variables(), kNaN);
  const milp::SolveResult r = run_model(pm, cfg, "all", "min-max regret model");

  PlanSolution sol;
  sol.model = "regret";
  stamp(sol, r);
  const std::string status = sol.status;
  const double gap = sol.gap;
  sol.first = extract_first(in, pm, r.values);

  // Best response per scenario under the chosen first stage.
  double worst = 0.0;
  for (int s = 0; s < ns; ++s) {
    PlanSolution e = evaluate_first_stage(in, sol.first, s, cfg);
    sol.nodes += e.nodes;
    sol.seconds += e.seconds;
    ScenarioResult sr = std::move(e.scenarios[0]);
    sr.cost.best = bs[s];
    sr.cost.regret = sr.cost.total - bs[s];
    worst = std::max(worst, *sr.cost.regret);
    sol.scenarios.push_back(std::move(sr));
  }
  sol.status = status;
  sol.gap = gap;
  sol.regret = worst;
  sol.objective = r.objective / kMio;
  return sol;
}

std::vector<PlanSolution> best_solutions(const PlanningInput& in,
                                         const SolverConfig& cfg) {
  in.validate();
  const int ns = in.scenarios.num_scenarios();
  std::vector<PlanSolution> out(ns);
  std::vector<std::exception_ptr> errors(ns);
#pragma omp parallel for schedule(dynamic, 1)
  for (int s = 0; s < ns; ++s) {
    try {
      out[s] = solve_m1(in, s, cfg);
    } catch (...) {
      errors[s] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

std::vector<PlanSolution> best_solutions_serial(const PlanningInput& in,
                                                const SolverConfig& cfg) {
  std::vector<PlanSolution> out;
  for (int s = 0; s < in.scenarios.num_scenarios(); ++s) {
    out.push_back(solve_m1(in, s, cfg));
  }
  return out;
}

CostBreakdown recompute_breakdown(const PlanningInput& in,
                                  const FirstStageDecision& first,
                                  const SecondStageDecision& second) {
  const std::vector<double> lengths = in.arc_lengths();
  const double i0 = investment_cost(first.flow, first.built, in.trends, lengths);
  const double i1 =
      investment_cost(second.flow, second.built, in.trends, lengths);
  double r = 0.0;
  for (std::size_t a = 0; a < second.option.size(); ++a) {
    if (second.option[a] != UpgradeOption::kPressureIncrease) continue;
    r += in.horizon.o2_cost *
         investment_cost({first.flow[a]}, {first.built[a]}, in.trends,
                         {lengths[a]});
  }
  return make_breakdown(i0, i1, r, in.horizon);
}

namespace {

nlohmann::ordered_json cost_json(const CostBreakdown& c) {
  nlohmann::ordered_json j;
  j["i0"] = c.i0;
  j["o0"] = c.o0;
  j["i1"] = c.i1;
  j["r"] = c.r;
  j["o1"] = c.o1;
  j["total"] = c.total;
  if (c.best) j["best"] = *c.best;
  if (c.regret) j["regret"] = *c.regret;
  return j;
}

std::string_view option_name(UpgradeOption o) {
  return o == UpgradeOption::kPressureIncrease ? "pressure_increase" : "loop";
}

UpgradeOption option_from_name(const std::string& s) {
  if (s == "pressure_increase") return UpgradeOption::kPressureIncrease;
  if (s == "loop") return UpgradeOption::kLoop;
  throw ValidationError("unknown upgrade option '" + s + "'");
}

Matrix read_matrix(const nlohmann::json& j, std::size_t rows,
                   std::size_t cols, const char* what) {
  Matrix m = j.get<Matrix>();
  if (m.size() != rows) {
    throw ValidationError(std::string("plan field '") + what +
                          "' has the wrong arc count");
  }
  for (const auto& row : m) {
    if (row.size() != cols) {
      throw ValidationError(std::string("plan field '") + what +
                            "' has the wrong trend count");
    }
  }
  return m;
}

}  // namespace

nlohmann::ordered_json plan_to_json(const PlanSolution& plan,
                                    const PlanningInput& in) {
  nlohmann::ordered_json j;
  j["model"] = plan.model;
  j["status"] = plan.status;
  j["objective"] = plan.objective;
  if (plan.regret) j["regret"] = *plan.regret;
  if (plan.step1_i0) j["step1_i0"] = *plan.step1_i0;
  j["gap"] = plan.gap;
  j["nodes"] = plan.nodes;
  j["seconds"] = plan.seconds;
  nlohmann::ordered_json arcs = nlohmann::ordered_json::array();
  for (const GraphArc& a : in.graph.arcs) {
    arcs.push_back({in.graph.nodes[a.from].id, in.graph.nodes[a.to].id});
  }
  j["arcs"] = arcs;
  j["first"] = {{"built", plan.first.built}, {"flow", plan.first.flow}};
  nlohmann::ordered_json scen = nlohmann::ordered_json::array();
  for (const ScenarioResult& r : plan.scenarios) {
    nlohmann::ordered_json s;
    s["id"] = r.scenario;
    std::vector<std::string> options;
    for (UpgradeOption o : r.decision.option) {
      options.emplace_back(option_name(o));
    }
    s["option"] = options;
    s["built"] = r.decision.built;
    s["flow"] = r.decision.flow;
    s["total_flow"] = r.decision.total_flow;
    s["restructure"] = r.decision.restructure;
    s["cost"] = cost_json(r.cost);
    scen.push_back(std::move(s));
  }
  j["scenarios"] = scen;
  return j;
}

PlanSolution plan_from_json(const nlohmann::json& doc,
                            const PlanningInput& in) {
  try {
    const std::size_t na = in.graph.arcs.size();
    const std::size_t nc = in.trends.size();
    const auto& arcs = doc.at("arcs");
    if (arcs.size() != na) {
      throw ValidationError("plan arc count does not match the graph");
    }
    for (std::size_t a = 0; a < na; ++a) {
      const GraphArc& g = in.graph.arcs[a];
      if (arcs[a].at(0).get<std::string>() != in.graph.nodes[g.from].id ||
          arcs[a].at(1).get<std::string>() != in.graph.nodes[g.to].id) {
        throw ValidationError("plan arc " + std::to_string(a) +
                              " does not match the graph");
      }
    }
    PlanSolution p;
    p.model = doc.at("model").get<std::string>();
    p.status = doc.value("status", std::string("OPTIMAL"));
    p.objective = doc.at("objective").get<double>();
    if (doc.contains("regret")) p.regret = doc["regret"].get<double>();
    if (doc.contains("step1_i0")) p.step1_i0 = doc["step1_i0"].get<double>();
    p.gap = doc.value("gap", 0.0);
    p.nodes = doc.value("nodes", 0L);
    p.seconds = doc.value("seconds", 0.0);
    p.first.built = read_matrix(doc.at("first").at("built"), na, nc, "built");
    p.first.flow = read_matrix(doc.at("first").at("flow"), na, nc, "flow");
    for (const auto& s : doc.at("scenarios")) {
      ScenarioResult r;
      r.scenario = s.at("id").get<std::string>();
      const int idx = in.scenarios.find(r.scenario);
      if (idx < 0) {
        throw ValidationError("plan names unknown scenario " + r.scenario);
      }
      for (const auto& o : s.at("option")) {
        r.decision.option.push_back(option_from_name(o.get<std::string>()));
      }
      r.decision.built = read_matrix(s.at("built"), na, nc, "built");
      r.decision.flow = read_matrix(s.at("flow"), na, nc, "flow");
      r.decision.total_flow = s.at("total_flow").get<std::vector<double>>();
      r.decision.restructure = s.at("restructure").get<std::vector<double>>();
      if (r.decision.option.size() != na || r.decision.total_flow.size() != na ||
          r.decision.restructure.size() != na) {
        throw ValidationError("plan scenario " + r.scenario +
                              " has the wrong arc count");
      }
      r.cost = recompute_breakdown(in, p.first, r.decision);
      const auto& c = s.at("cost");
      if (c.contains("best")) {
        r.cost.best = c["best"].get<double>();
        r.cost.regret = r.cost.total - *r.cost.best;
      }
      p.scenarios.push_back(std::move(r));
    }
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed plan document: ") + e.what());
  }
}

}  // namespace pipeplan
