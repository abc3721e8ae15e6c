// Two-stage pipeline network design models on a candidate graph.
//
// First stage (period 0, initial scenario demand): per arc and trend a build
// binary b and flow p with Qmin*b <= p <= Qmax*b, at most one trend per arc,
// and node balance outflow - inflow >= d (equality at zero-demand nodes).
//
// Second stage (period 1, per scenario): option binaries u1 (loop / new line /
// keep) and u2 (pressure increase) with u1 + u2 = 1, fresh trend-bounded
// builds, total arc flow f balanced against the period-1 demand, and
//   u1 => f = sum_c p + sum_c p_s
//   u2 => f = o2_max * sum_c p
//   u2 => r = o2_cost * I0_arc
// With relaxed coupling the two flow rows become "<=".
//
// Inside the MILP all money is in Mio EUR; decisions and breakdowns returned
// to callers are in EUR.

#ifndef PIPEPLAN_PLANNING_H_
#define PIPEPLAN_PLANNING_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pipeplan/candidate_graph.h"
#include "pipeplan/cost_model.h"
#include "pipeplan/economics.h"
#include "pipeplan/milp/model.h"
#include "pipeplan/milp/solver.h"
#include "pipeplan/scenario.h"

namespace pipeplan {

struct PlanningInput {
  CandidateGraph graph;
  std::vector<Trend> trends;
  ScenarioSet scenarios;
  HorizonParams horizon;
  bool relaxed_coupling = false;

  // Throws ValidationError / ParameterError on inconsistent parts.
  void validate() const;
  std::vector<double> arc_lengths() const;
};

struct SolverConfig {
  std::string backend = "builtin";
  milp::SolveOptions options;
};

using Matrix = std::vector<std::vector<double>>;  // [arc][trend]

struct FirstStageDecision {
  Matrix built;
  Matrix flow;  // Mt/a

  bool empty() const { return built.empty(); }
};

enum class UpgradeOption { kLoop = 1, kPressureIncrease = 2 };

struct SecondStageDecision {
  std::vector<UpgradeOption> option;  // per arc
  Matrix built;                       // new lines
  Matrix flow;
  std::vector<double> total_flow;     // f, Mt/a
  std::vector<double> restructure;    // r, EUR
};

struct ScenarioResult {
  std::string scenario;
  SecondStageDecision decision;
  CostBreakdown cost;
};

struct PlanSolution {
  std::string model;  // "m1", "m2" or "regret"
  FirstStageDecision first;
  std::vector<ScenarioResult> scenarios;
  double objective = 0.0;           // EUR, as reported by the solver
  std::optional<double> regret;     // max_s (total_s - B_s), EUR
  std::optional<double> step1_i0;   // z_t0, EUR (M2)
  std::string status = "OPTIMAL";
  double gap = 0.0;
  long nodes = 0;
  double seconds = 0.0;

  const ScenarioResult* find(const std::string& scenario) const;
};

// Variable indices of the model fragments.
struct FirstStageVars {
  std::vector<std::vector<int>> b;
  std::vector<std::vector<int>> p;
};

struct SecondStageVars {
  int scenario = 0;
  std::string id;
  std::vector<int> u1;
  std::vector<int> u2;
  std::vector<int> f;
  std::vector<int> r;
  std::vector<std::vector<int>> b;
  std::vector<std::vector<int>> p;
  milp::LinearExpr i1;     // Mio EUR
  milp::LinearExpr r_sum;
  milp::LinearExpr o1;
  milp::LinearExpr total;  // I0 + O0 + proration * I1 + O1 + R
};

struct PlanModel {
  milp::Model model;
  FirstStageVars first;
  std::vector<milp::LinearExpr> i0_arc;  // Mio EUR
  milp::LinearExpr i0;
  milp::LinearExpr o0;
  std::vector<SecondStageVars> second;
  milp::Hint hint;  // empty or one entry per variable (NaN = none)
};

// First-stage variables and rows for the initial scenario's period-0 demand.
PlanModel build_first_stage(const PlanningInput& in);

// Appends the second stage for each listed scenario index.
void build_second_stage(PlanModel& pm, const PlanningInput& in,
                        const std::vector<int>& scenarios);

// Hints the backend with the plan's first stage and any second stage whose
// scenario is in the model. No-op for an empty plan; ParameterError when the
// plan's arc or trend count differs from the model's.
void warm_start(const PlanSolution& plan, PlanModel& pm);

// Perfect information: both periods optimised together for scenario `s`.
PlanSolution solve_m1(const PlanningInput& in, int s, const SolverConfig& cfg,
                      const PlanSolution* hint = nullptr);

// Successive information: period 0 minimises I0 for the initial scenario;
// period 1 then optimises the upgrades for `s` with the first stage fixed.
// Throws InfeasibleError naming the step and scenario.
PlanSolution solve_m2(const PlanningInput& in, int s, const SolverConfig& cfg);

// Min-max regret over all scenarios. `best` maps scenario id to B_s in EUR;
// a missing id is a ParameterError. Afterwards each scenario's recourse is
// re-optimised with the first stage fixed, so reported per-scenario costs are
// that plan's best response.
PlanSolution solve_min_max_regret(const PlanningInput& in,
                                  const std::map<std::string, double>& best,
                                  const SolverConfig& cfg,
                                  const PlanSolution* hint = nullptr);

// Optimal recourse for one scenario under a fixed first stage; the solution's
// objective is that scenario's total.
PlanSolution evaluate_first_stage(const PlanningInput& in,
                                  const FirstStageDecision& first, int s,
                                  const SolverConfig& cfg);

// M1 for every scenario (the B_s values), concurrently, one model per worker.
std::vector<PlanSolution> best_solutions(const PlanningInput& in,
                                         const SolverConfig& cfg);
std::vector<PlanSolution> best_solutions_serial(const PlanningInput& in,
                                                const SolverConfig& cfg);

// Cost breakdown of a decision pair recomputed from the decisions alone.
CostBreakdown recompute_breakdown(const PlanningInput& in,
                                  const FirstStageDecision& first,
                                  const SecondStageDecision& second);

nlohmann::ordered_json plan_to_json(const PlanSolution& plan,
                                    const PlanningInput& in);
PlanSolution plan_from_json(const nlohmann::json& doc,
                            const PlanningInput& in);

}  // namespace pipeplan

#endif  // PIPEPLAN_PLANNING_H_
