#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "pipeplan/candidate_graph.h"
#include "pipeplan/errors.h"

namespace pipeplan {
namespace {

RasterMap uniform(int w, int h, double cs) {
  GridSpec s;
  s.width = w;
  s.height = h;
  s.cell_size = cs;
  return RasterMap(s);
}

TerminalSpec at(const RasterMap& r, std::string id, NodeKind kind, Cell c) {
  return {std::move(id), kind, r.center(c)};
}

// Arc lengths along a route, split at the graph's kept nodes.
double contracted_length(const CandidateGraph& g, const RasterMap& r,
                         const RouteResult& route) {
  std::map<int, int> node_at;
  for (int i = 0; i < g.num_nodes(); ++i) node_at[r.index(g.nodes[i].cell)] = i;
  double sum = 0.0;
  int last = -1;
  for (const Cell& c : route.cells) {
    auto it = node_at.find(r.index(c));
    if (it == node_at.end()) continue;
    if (last >= 0) {
      const int a = g.find_arc(last, it->second);
      EXPECT_GE(a, 0);
      if (a >= 0) sum += g.arcs[a].length_km;
    }
    last = it->second;
  }
  return sum;
}

std::vector<double> graph_distances(const CandidateGraph& g, int src) {
  std::vector<double> d(g.num_nodes(), std::numeric_limits<double>::infinity());
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> q;
  d[src] = 0;
  q.push({0, src});
  while (!q.empty()) {
    auto [du, u] = q.top();
    q.pop();
    if (du > d[u]) continue;
    for (const GraphArc& a : g.arcs) {
      if (a.from == u && du + a.length_km < d[a.to]) {
        d[a.to] = du + a.length_km;
        q.push({d[a.to], a.to});
      }
    }
  }
  return d;
}

TEST(CandidateGraph, CollinearEmittersFormChain) {
  RasterMap r = uniform(10, 3, 1.5);
  auto b = build_candidate_graph(r, {at(r, "a", NodeKind::kEmitter, {1, 0}),
                                     at(r, "b", NodeKind::kEmitter, {1, 4}),
                                     at(r, "c", NodeKind::kEmitter, {1, 9})});
  EXPECT_EQ(b.graph.num_nodes(), 3);
  EXPECT_EQ(b.graph.num_arcs(), 4);
  EXPECT_GE(b.graph.find_arc(0, 1), 0);
  EXPECT_GE(b.graph.find_arc(1, 2), 0);
  EXPECT_EQ(b.graph.find_arc(0, 2), -1);
}

TEST(CandidateGraph, ContractionSumsLengths) {
  RasterMap r = uniform(1, 6, 1.0);
  auto b = build_candidate_graph(r, {at(r, "a", NodeKind::kEmitter, {0, 0}),
                                     at(r, "c", NodeKind::kSink, {5, 0})});
  ASSERT_EQ(b.graph.num_arcs(), 2);
  EXPECT_DOUBLE_EQ(b.graph.arcs[0].length_km, 5.0);
  EXPECT_EQ(b.graph.arcs[0].polyline.size(), 6u);
  EXPECT_EQ(b.graph.arcs[1].polyline.front(), (Cell{5, 0}));
}

TEST(CandidateGraph, RandomEmittersPreserveRouteLengths) {
  std::mt19937 rng(31);
  std::uniform_int_distribution<int> pos(0, 29);
  for (int trial = 0; trial < 5; ++trial) {
    RasterMap r = uniform(30, 30, 1.5);
    std::vector<TerminalSpec> t;
    std::set<std::pair<int, int>> used;
    while (t.size() < 5) {
      Cell c{pos(rng), pos(rng)};
      if (!used.insert({c.row, c.col}).second) continue;
      t.push_back(at(r, "e" + std::to_string(t.size()),
                     t.empty() ? NodeKind::kSink : NodeKind::kEmitter, c));
    }
    auto b = build_candidate_graph(r, t);
    for (const RouteResult& route : b.routes) {
      const double got = contracted_length(b.graph, r, route);
      EXPECT_NEAR(got, route.length_km, 1e-9 * route.length_km);
    }
    for (int i = 0; i < 5; ++i) {
      std::vector<double> d = graph_distances(b.graph, i);
      for (int j = 0; j < 5; ++j) {
        if (i == j) continue;
        const double lcp =
            least_cost_path(r, b.graph.nodes[i].cell, b.graph.nodes[j].cell)
                .penalty;
        EXPECT_GE(d[j], lcp - 1e-9);
      }
    }
    // Contracted skeleton: transport nodes have degree >= 3 except where a
    // parallel chain had to be split.
    for (int n = 5; n < b.graph.num_nodes(); ++n) {
      int deg = 0;
      for (const GraphArc& a : b.graph.arcs) deg += a.from == n;
      EXPECT_NE(deg, 0);
    }
  }
}

TEST(CandidateGraph, ColocatedNodesMerge) {
  RasterMap r = uniform(5, 5, 1.5);
  Point p = r.center({2, 2});
  std::vector<TerminalSpec> t{{"x", NodeKind::kEmitter, p},
                              {"y", NodeKind::kEmitter, {p.x + 0.1, p.y}},
                              {"s", NodeKind::kSink, r.center({0, 0})}};
  auto merged = merge_colocated(r, t);
  ASSERT_EQ(merged.size(), 2u);
  EXPECT_EQ(merged[0].members, (std::vector<std::string>{"x", "y"}));
  auto b = build_candidate_graph(r, t);
  EXPECT_EQ(b.graph.find_node("y"), 0);

  std::vector<TerminalSpec> clash{{"x", NodeKind::kEmitter, p},
                                  {"s", NodeKind::kSink, p}};
  EXPECT_THROW(merge_colocated(r, clash), ValidationError);
  std::vector<TerminalSpec> dup{{"x", NodeKind::kEmitter, p},
                                {"x", NodeKind::kSink, r.center({0, 0})}};
  EXPECT_THROW(merge_colocated(r, dup), ValidationError);
}

TEST(CandidateGraph, UnroutablePairNamesNodes) {
  RasterMap r = uniform(5, 3, 1.0);
  for (int row = 0; row < 3; ++row) r.set_blocked({row, 2}, true);
  try {
    build_candidate_graph(r, {at(r, "west", NodeKind::kEmitter, {1, 0}),
                              at(r, "east", NodeKind::kSink, {1, 4})});
    FAIL() << "expected NoRouteError";
  } catch (const NoRouteError& e) {
    EXPECT_EQ(e.from_id(), "west");
    EXPECT_EQ(e.to_id(), "east");
  }
}

TEST(CandidateGraph, JsonRoundTripIsByteStable) {
  RasterMap r = uniform(12, 12, 1.5);
  r.set_multiplier({5, 5}, 30);
  auto b = build_candidate_graph(r, {at(r, "a", NodeKind::kEmitter, {0, 0}),
                                     at(r, "b", NodeKind::kEmitter, {11, 2}),
                                     at(r, "c", NodeKind::kEmitter, {6, 11}),
                                     at(r, "s", NodeKind::kSink, {5, 6})});
  const std::string first = graph_to_json(b.graph, r.spec()).dump(2);
  CandidateGraph back = graph_from_json(nlohmann::json::parse(first));
  EXPECT_EQ(graph_to_json(back, r.spec()).dump(2), first);
  auto again = build_candidate_graph(r, {at(r, "a", NodeKind::kEmitter, {0, 0}),
                                         at(r, "b", NodeKind::kEmitter, {11, 2}),
                                         at(r, "c", NodeKind::kEmitter, {6, 11}),
                                         at(r, "s", NodeKind::kSink, {5, 6})},
                                     false);
  EXPECT_EQ(graph_to_json(again.graph, r.spec()).dump(2), first);
}

}  // namespace
}  // namespace pipeplan
