#include "pipeplan/scenario.h"

#include <cmath>
#include <set>

#include "pipeplan/errors.h"

namespace pipeplan {
namespace {

std::vector<double> resolve(const DemandTable& table,
                            const CandidateGraph& graph,
                            const std::string& where) {
  std::vector<double> d(graph.num_nodes(), 0.0);
  for (const auto& [id, value] : table) {
    const int n = graph.find_node(id);
    if (n < 0) {
      throw ValidationError(where + ": unknown node id '" + id + "'");
    }
    if (!std::isfinite(value)) {
      throw ValidationError(where + ": demand of '" + id + "' is not finite");
    }
    const NodeKind kind = graph.nodes[n].kind;
    if ((kind == NodeKind::kEmitter && value < 0) ||
        (kind == NodeKind::kSink && value > 0) ||
        (kind == NodeKind::kTransport && value != 0)) {
      throw ValidationError(where + ": demand " + std::to_string(value) +
                            " has the wrong sign for " +
                            std::string(to_string(kind)) + " '" + id + "'");
    }
    d[n] += value;
  }
  double supply = 0.0;
  double capacity = 0.0;
  for (double v : d) (v > 0 ? supply : capacity) += std::abs(v);
  if (supply > capacity * (1.0 + 1e-12)) {
    throw ValidationError(where + ": emissions " + std::to_string(supply) +
                          " Mt/a exceed sink capacity " +
                          std::to_string(capacity) + " Mt/a");
  }
  return d;
}

DemandTable read_table(const nlohmann::json& j) {
  DemandTable t;
  for (auto it = j.begin(); it != j.end(); ++it) {
    t[it.key()] = it.value().get<double>();
  }
  return t;
}

}  // namespace

void HorizonParams::validate() const {
  if (!(0 < n1 && n1 < n2)) {
    throw ValidationError("horizon needs 0 < n1 < n2");
  }
  if (!(tau >= 0.0) || !std::isfinite(tau)) {
    throw ValidationError("discount rate must be >= 0");
  }
  if (!(om >= 0.0) || !std::isfinite(om)) {
    throw ValidationError("O&M fraction must be >= 0");
  }
  if (!(o2_max > 1.0) || !std::isfinite(o2_max)) {
    throw ValidationError("pressure-increase factor o2_max must be > 1");
  }
  if (!(o2_cost > 0.0) || !std::isfinite(o2_cost)) {
    throw ValidationError("pressure-increase cost o2_cost must be > 0");
  }
}

void to_json(nlohmann::json& j, const HorizonParams& h) {
  j = nlohmann::json{{"n1", h.n1},
                     {"n2", h.n2},
                     {"tau", h.tau},
                     {"om", h.om},
                     {"o2_max", h.o2_max},
                     {"o2_cost", h.o2_cost},
                     {"om_no_overlap", h.om_no_overlap}};
}

void from_json(const nlohmann::json& j, HorizonParams& h) {
  HorizonParams d;
  h.n1 = j.value("n1", d.n1);
  h.n2 = j.value("n2", d.n2);
  h.tau = j.value("tau", d.tau);
  h.om = j.value("om", d.om);
  h.o2_max = j.value("o2_max", d.o2_max);
  h.o2_cost = j.value("o2_cost", d.o2_cost);
  h.om_no_overlap = j.value("om_no_overlap", d.om_no_overlap);
}

int ScenarioSet::find(const std::string& id) const {
  for (int i = 0; i < num_scenarios(); ++i) {
    if (scenarios[i].id == id) return i;
  }
  return -1;
}

ScenarioSet load_scenarios(const nlohmann::json& doc,
                           const CandidateGraph& graph) {
  ScenarioSet set;
  try {
    set.initial_id = doc.at("initial").get<std::string>();
    set.period0_input = read_table(doc.at("period0"));
    std::set<std::string> ids;
    for (const auto& sj : doc.at("scenarios")) {
      Scenario s;
      s.id = sj.at("id").get<std::string>();
      if (!ids.insert(s.id).second) {
        throw ValidationError("duplicate scenario id '" + s.id + "'");
      }
      s.period1_input = read_table(sj.at("period1"));
      set.scenarios.push_back(std::move(s));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed scenario document: ") +
                          e.what());
  }
  if (set.scenarios.empty()) {
    throw ValidationError("scenario set is empty");
  }
  if (set.initial_index() < 0) {
    throw ValidationError("initial scenario '" + set.initial_id +
                          "' is not defined");
  }
  set.period0 = resolve(set.period0_input, graph, "period 0");
  for (Scenario& s : set.scenarios) {
    s.period1 = resolve(s.period1_input, graph, "scenario " + s.id);
  }
  return set;
}

nlohmann::json serialize_scenarios(const ScenarioSet& set) {
  nlohmann::json doc;
  doc["initial"] = set.initial_id;
  doc["period0"] = set.period0_input;
  doc["scenarios"] = nlohmann::json::array();
  for (const Scenario& s : set.scenarios) {
    doc["scenarios"].push_back({{"id", s.id}, {"period1", s.period1_input}});
  }
  return doc;
}

std::vector<int> scenario_delta(const ScenarioSet& set, int s) {
  std::vector<int> out;
  const std::vector<double>& d1 = set.scenarios.at(s).period1;
  for (std::size_t i = 0; i < d1.size(); ++i) {
    if (d1[i] != set.period0[i]) out.push_back(static_cast<int>(i));
  }
  return out;
}

}  // namespace pipeplan
