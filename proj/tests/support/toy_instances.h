// Seeded toy planning instances for tests and the acceptance suite. The graph
// is assembled directly (no raster), with two concave trends and demands that
// only grow from period 0 to period 1.

#ifndef PIPEPLAN_TESTS_SUPPORT_TOY_INSTANCES_H_
#define PIPEPLAN_TESTS_SUPPORT_TOY_INSTANCES_H_

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "../oracle/plan_oracle.h"
#include "pipeplan/planning.h"

namespace toy {

struct NodeDef {
  std::string id;
  pipeplan::NodeKind kind;
};

// Undirected edges become anti-parallel arc pairs, in edge order.
inline pipeplan::CandidateGraph make_graph(
    const std::vector<NodeDef>& nodes,
    const std::vector<std::pair<std::pair<int, int>, double>>& edges) {
  pipeplan::CandidateGraph g;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    pipeplan::GraphNode n;
    n.id = nodes[i].id;
    n.kind = nodes[i].kind;
    n.cell = {0, static_cast<int>(i)};
    n.location = {static_cast<double>(i), 0.0};
    if (n.kind != pipeplan::NodeKind::kTransport) n.members = {n.id};
    g.nodes.push_back(n);
  }
  for (const auto& [ends, km] : edges) {
    const auto [u, v] = ends;
    g.arcs.push_back({u, v, km, {g.nodes[u].cell, g.nodes[v].cell}});
    g.arcs.push_back({v, u, km, {g.nodes[v].cell, g.nodes[u].cell}});
  }
  return g;
}

inline oracle::PlanInstance to_oracle(const pipeplan::PlanningInput& in) {
  oracle::PlanInstance o;
  o.nodes = in.graph.num_nodes();
  for (const auto& a : in.graph.arcs) o.arcs.push_back({a.from, a.to, a.length_km});
  for (const auto& t : in.trends) {
    o.trends.push_back({t.slope, t.intercept, t.q_min, t.q_max});
  }
  o.d0 = in.scenarios.period0;
  for (const auto& s : in.scenarios.scenarios) o.d1.push_back(s.period1);
  o.n1 = in.horizon.n1;
  o.n2 = in.horizon.n2;
  o.tau = in.horizon.tau;
  o.om = in.horizon.om;
  o.o2max = in.horizon.o2_max;
  o.o2cost = in.horizon.o2_cost;
  o.om_no_overlap = in.horizon.om_no_overlap;
  return o;
}

// Uniform in [lo, hi) from the raw generator, so values do not depend on the
// standard library's distribution implementation.
inline double uniform(std::mt19937& g, double lo, double hi) {
  return lo + (hi - lo) * (static_cast<double>(g()) / 4294967296.0);
}

inline std::vector<pipeplan::Trend> make_trends(std::mt19937& g) {
  const double m0 = uniform(g, 4e4, 8e4);
  const double m1 = m0 * uniform(g, 0.3, 0.6);
  const double y0 = uniform(g, 3e5, 6e5);
  const double q1 = uniform(g, 4.0, 8.0);
  return {{0, m0, y0, 0.0, q1}, {1, m1, y0 + (m0 - m1) * q1, q1, 40.0}};
}

enum class Shape {
  kStar,      // E1-S, E2-S
  kPath,      // E1-T, T-S
  kChain,     // E1-E2, E2-S
  kMeshed,    // E1-T, E2-T, T-S, E1-S (8 arcs)
};

struct ToyCase {
  std::string label;
  pipeplan::PlanningInput input;
};

// `scenarios` scenarios; the first is the initial one. When `same_first`, the
// initial scenario keeps its period-0 demand in period 1.
inline ToyCase make_toy(std::uint32_t seed, Shape shape, int scenarios,
                        bool same_first = false) {
  using pipeplan::NodeKind;
  std::mt19937 g(seed);
  std::vector<NodeDef> nodes;
  std::vector<std::pair<std::pair<int, int>, double>> edges;
  auto len = [&] { return uniform(g, 5.0, 60.0); };
  switch (shape) {
    case Shape::kStar:
      nodes = {{"E1", NodeKind::kEmitter}, {"E2", NodeKind::kEmitter},
               {"S", NodeKind::kSink}};
      edges = {{{0, 2}, len()}, {{1, 2}, len()}};
      break;
    case Shape::kPath:
      nodes = {{"E1", NodeKind::kEmitter}, {"T", NodeKind::kTransport},
               {"S", NodeKind::kSink}};
      edges = {{{0, 1}, len()}, {{1, 2}, len()}};
      break;
    case Shape::kChain:
      nodes = {{"E1", NodeKind::kEmitter}, {"E2", NodeKind::kEmitter},
               {"S", NodeKind::kSink}};
      edges = {{{0, 1}, len()}, {{1, 2}, len()}};
      break;
    case Shape::kMeshed:
      nodes = {{"E1", NodeKind::kEmitter}, {"E2", NodeKind::kEmitter},
               {"T", NodeKind::kTransport}, {"S", NodeKind::kSink}};
      edges = {{{0, 2}, len()}, {{1, 2}, len()}, {{2, 3}, len()},
               {{0, 3}, len()}};
      break;
  }

  pipeplan::PlanningInput in;
  in.graph = make_graph(nodes, edges);
  in.trends = make_trends(g);

  nlohmann::json doc;
  doc["initial"] = "S1";
  nlohmann::json p0 = nlohmann::json::object();
  std::vector<std::string> emitters;
  for (const NodeDef& n : nodes) {
    if (n.kind == NodeKind::kEmitter) emitters.push_back(n.id);
  }
  std::vector<double> base;
  for (std::size_t i = 0; i < emitters.size(); ++i) {
    // The second emitter sometimes joins only in period 1.
    const bool joins_later = i == 1 && uniform(g, 0.0, 1.0) < 0.35;
    base.push_back(joins_later ? 0.0 : uniform(g, 1.0, 6.0));
    p0[emitters[i]] = base.back();
  }
  const double capacity = 60.0;
  p0["S"] = -capacity;
  doc["period0"] = p0;
  doc["scenarios"] = nlohmann::json::array();
  for (int s = 0; s < scenarios; ++s) {
    nlohmann::json p1 = nlohmann::json::object();
    for (std::size_t i = 0; i < emitters.size(); ++i) {
      double d = base[i];
      if (!(s == 0 && same_first)) {
        d = base[i] > 0.0 ? base[i] * uniform(g, 1.0, 1.6)
                          : (uniform(g, 0.0, 1.0) < 0.7 ? uniform(g, 1.0, 5.0)
                                                        : 0.0);
      }
      p1[emitters[i]] = d;
    }
    p1["S"] = -capacity;
    doc["scenarios"].push_back({{"id", "S" + std::to_string(s + 1)},
                                {"period1", p1}});
  }
  in.scenarios = pipeplan::load_scenarios(doc, in.graph);
  return {"seed " + std::to_string(seed), std::move(in)};
}

}  // namespace toy

#endif  // PIPEPLAN_TESTS_SUPPORT_TOY_INSTANCES_H_
