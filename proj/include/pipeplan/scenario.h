// Demand scenarios and planning-horizon parameters.
//
// Demands are in Mt/a: > 0 emitters, < 0 sinks (capacity), 0 transport. The
// period-0 table is shared by all scenarios (it is the initial scenario's
// demand); each scenario carries its own period-1 table.

#ifndef PIPEPLAN_SCENARIO_H_
#define PIPEPLAN_SCENARIO_H_

#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "pipeplan/candidate_graph.h"

namespace pipeplan {

struct HorizonParams {
  int n1 = 5;             // years until the second investment
  int n2 = 25;            // planning horizon, years
  double tau = 0.05;      // discount rate
  double om = 0.02;       // annual O&M as a fraction of cumulative capex
  double o2_max = 1.25;   // pressure-increase capacity factor
  double o2_cost = 0.3;   // pressure-increase cost, fraction of arc capex
  // Start the period-1 O&M sum at n1 + 1 instead of n1.
  bool om_no_overlap = false;

  // (n2 - n1) / n2
  double proration() const {
    return static_cast<double>(n2 - n1) / static_cast<double>(n2);
  }
  int o1_first_year() const { return om_no_overlap ? n1 + 1 : n1; }

  // Throws ValidationError when an invariant fails.
  void validate() const;
};

void to_json(nlohmann::json& j, const HorizonParams& h);
void from_json(const nlohmann::json& j, HorizonParams& h);

// Demand table keyed by input node id, as written in the configuration.
using DemandTable = std::map<std::string, double>;

struct Scenario {
  std::string id;
  DemandTable period1_input;
  std::vector<double> period1;  // per graph node
};

class ScenarioSet {
 public:
  std::string initial_id;
  DemandTable period0_input;
  std::vector<double> period0;  // per graph node
  std::vector<Scenario> scenarios;

  int num_scenarios() const { return static_cast<int>(scenarios.size()); }
  // Index of scenario `id`; -1 when absent.
  int find(const std::string& id) const;
  int initial_index() const { return find(initial_id); }
};

// Validates the document against the graph: every referenced id must name a
// graph node (or a member of a merged node; merged demands are summed), no
// duplicate scenario ids, the initial scenario must exist, signs must match
// node kinds (transport nodes carry no demand), and in
// every period total emissions must not exceed total sink capacity. Node ids
// missing from a table have demand 0. Throws ValidationError.
//
// Document shape:
//   {"initial": "S1", "period0": {"id": d, ...},
//    "scenarios": [{"id": "S1", "period1": {"id": d, ...}}, ...]}
ScenarioSet load_scenarios(const nlohmann::json& doc,
                           const CandidateGraph& graph);

nlohmann::json serialize_scenarios(const ScenarioSet& set);

// Graph node indices whose period-1 demand in scenario `s` differs from the
// shared period-0 demand, ascending.
std::vector<int> scenario_delta(const ScenarioSet& set, int s);

}  // namespace pipeplan

#endif  // PIPEPLAN_SCENARIO_H_
