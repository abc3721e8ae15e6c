// Candidate graph: terminals (emitters, sinks) linked by the least-cost raster
// routes of their Delaunay neighbours, with pass-through route cells
// contracted away and every undirected edge turned into an anti-parallel arc
// pair.

#ifndef PIPEPLAN_CANDIDATE_GRAPH_H_
#define PIPEPLAN_CANDIDATE_GRAPH_H_

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "pipeplan/raster.h"
#include "pipeplan/routing.h"
#include "pipeplan/triangulation.h"

namespace pipeplan {

enum class NodeKind { kEmitter, kSink, kTransport };

std::string_view to_string(NodeKind kind);
NodeKind node_kind_from_string(std::string_view name);

// A node as supplied by the user, before snapping.
struct TerminalSpec {
  std::string id;
  NodeKind kind = NodeKind::kEmitter;
  Point location;
};

struct GraphNode {
  std::string id;
  NodeKind kind = NodeKind::kTransport;
  Cell cell;
  Point location;  // centre of `cell`
  // Input ids snapped into this node (just `id` unless co-located inputs were
  // merged). Empty for transport nodes.
  std::vector<std::string> members;
};

struct GraphArc {
  int from = 0;
  int to = 0;
  double length_km = 0.0;
  std::vector<Cell> polyline;  // from-cell .. to-cell
};

class CandidateGraph {
 public:
  std::vector<GraphNode> nodes;
  std::vector<GraphArc> arcs;

  int num_nodes() const { return static_cast<int>(nodes.size()); }
  int num_arcs() const { return static_cast<int>(arcs.size()); }

  // Node whose id or member list contains `id`; -1 if none.
  int find_node(std::string_view id) const;
  // Index of arc from -> to; -1 if none.
  int find_arc(int from, int to) const;
  // Index of the anti-parallel partner of arc `a`.
  int reverse_arc(int a) const { return find_arc(arcs[a].to, arcs[a].from); }

  double total_length_km() const;  // each undirected edge counted once

  // Positive lengths, valid endpoints, unique ids, anti-parallel pairs of
  // equal length. Throws ValidationError.
  void validate() const;
};

// Snaps terminals to their cells and merges co-located ones (first id wins,
// members keep every input id). Throws ValidationError on duplicate ids, a
// transport-kind input, an emitter and a sink sharing a cell, or a point
// outside the grid.
std::vector<GraphNode> merge_colocated(const RasterMap& raster,
                                       const std::vector<TerminalSpec>& nodes);

struct GraphBuild {
  CandidateGraph graph;
  std::vector<IndexEdge> pairs;      // triangulated terminal pairs
  std::vector<RouteResult> routes;   // one per pair
};

// Terminals from every scenario go in, so each scenario's nodes exist in the
// one graph. Needs at least two distinct terminal cells (ValidationError) and
// a route for every pair (NoRouteError naming the two node ids).
//
// Cells shared by several routes become shared nodes. A node is kept when it
// is a terminal or its degree in the route union is not 2. Two distinct
// chains joining the same pair of kept nodes would give duplicate arcs, so
// all but the shortest get an interior transport node at their middle cell.
GraphBuild build_candidate_graph(const RasterMap& raster,
                                 const std::vector<TerminalSpec>& terminals,
                                 bool parallel = true);

// Deterministic JSON document; dump() of equal graphs is byte-identical.
nlohmann::ordered_json graph_to_json(const CandidateGraph& graph,
                                     const GridSpec& spec);
CandidateGraph graph_from_json(const nlohmann::json& doc);

}  // namespace pipeplan

#endif  // PIPEPLAN_CANDIDATE_GRAPH_H_
