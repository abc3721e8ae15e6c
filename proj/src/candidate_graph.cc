#include "pipeplan/candidate_graph.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <tuple>

#include "pipeplan/errors.h"

namespace pipeplan {
namespace {

double chain_length(const std::vector<Cell>& cells, double cell_size) {
  int orth = 0;
  int diag = 0;
  for (std::size_t i = 1; i < cells.size(); ++i) {
    (is_diagonal(cells[i - 1], cells[i]) ? diag : orth) += 1;
  }
  return cell_size * (orth + diag * std::numbers::sqrt2);
}

std::string transport_id(Cell c) {
  return "T" + std::to_string(c.row) + "_" + std::to_string(c.col);
}

struct Chain {
  int start;
  int end;
  std::vector<Cell> cells;
  double length;
};

}  // namespace

std::string_view to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::kEmitter:
      return "emitter";
    case NodeKind::kSink:
      return "sink";
    case NodeKind::kTransport:
      return "transport";
  }
  return "unknown";
}

NodeKind node_kind_from_string(std::string_view name) {
  if (name == "emitter") return NodeKind::kEmitter;
  if (name == "sink") return NodeKind::kSink;
  if (name == "transport") return NodeKind::kTransport;
  throw ValidationError("unknown node kind '" + std::string(name) + "'");
}

int CandidateGraph::find_node(std::string_view id) const {
  for (int i = 0; i < num_nodes(); ++i) {
    if (nodes[i].id == id) return i;
    for (const std::string& m : nodes[i].members) {
      if (m == id) return i;
    }
  }
  return -1;
}

int CandidateGraph::find_arc(int from, int to) const {
  for (int a = 0; a < num_arcs(); ++a) {
    if (arcs[a].from == from && arcs[a].to == to) return a;
  }
  return -1;
}

double CandidateGraph::total_length_km() const {
  double sum = 0.0;
  for (const GraphArc& a : arcs) {
    if (a.from < a.to) sum += a.length_km;
  }
  return sum;
}

void CandidateGraph::validate() const {
  std::set<std::string> ids;
  for (const GraphNode& n : nodes) {
    if (!ids.insert(n.id).second) {
      throw ValidationError("duplicate graph node id '" + n.id + "'");
    }
  }
  std::map<std::pair<int, int>, double> seen;
  for (const GraphArc& a : arcs) {
    if (a.from < 0 || a.from >= num_nodes() || a.to < 0 ||
        a.to >= num_nodes() || a.from == a.to) {
      throw ValidationError("arc with invalid endpoints");
    }
    if (!(a.length_km > 0.0) || !std::isfinite(a.length_km)) {
      throw ValidationError("arc " + nodes[a.from].id + "->" + nodes[a.to].id +
                            " has non-positive length");
    }
    if (!seen.emplace(std::make_pair(a.from, a.to), a.length_km).second) {
      throw ValidationError("duplicate arc " + nodes[a.from].id + "->" +
                            nodes[a.to].id);
    }
  }
  for (const auto& [key, len] : seen) {
    auto rev = seen.find({key.second, key.first});
    if (rev == seen.end() || rev->second != len) {
      throw ValidationError("arc " + nodes[key.first].id + "->" +
                            nodes[key.second].id +
                            " lacks an equal-length reverse arc");
    }
  }
}

std::vector<GraphNode> merge_colocated(const RasterMap& raster,
                                       const std::vector<TerminalSpec>& nodes) {
  std::set<std::string> ids;
  std::vector<GraphNode> out;
  std::map<int, int> by_cell;
  for (const TerminalSpec& t : nodes) {
    if (!ids.insert(t.id).second) {
      throw ValidationError("duplicate node id '" + t.id + "'");
    }
    if (t.kind == NodeKind::kTransport) {
      throw ValidationError("node '" + t.id +
                            "': transport nodes are created by routing, not "
                            "supplied");
    }
    const Cell c = raster.cell_at(t.location);
    auto [it, inserted] =
        by_cell.emplace(raster.index(c), static_cast<int>(out.size()));
    if (inserted) {
      out.push_back({t.id, t.kind, c, raster.center(c), {t.id}});
      continue;
    }
    GraphNode& host = out[it->second];
    if (host.kind != t.kind) {
      throw ValidationError("emitter and sink share a raster cell: '" +
                            host.id + "' and '" + t.id + "'");
    }
    host.members.push_back(t.id);
  }
  return out;
}

GraphBuild build_candidate_graph(const RasterMap& raster,
                                 const std::vector<TerminalSpec>& terminals,
                                 bool parallel) {
  GraphBuild build;
  std::vector<GraphNode> terms = merge_colocated(raster, terminals);
  if (terms.size() < 2) {
    throw ValidationError("candidate graph needs at least two distinct "
                          "terminal cells");
  }

  std::vector<Point> points;
  for (const GraphNode& n : terms) points.push_back(n.location);
  build.pairs = triangulate(points);
  std::vector<CellPair> cell_pairs;
  for (const auto& [i, j] : build.pairs) {
    cell_pairs.emplace_back(terms[i].cell, terms[j].cell);
  }
  try {
    build.routes = parallel ? route_pairs(raster, cell_pairs)
                            : route_pairs_serial(raster, cell_pairs);
  } catch (const NoRouteError&) {
    // Identify the first failing pair by node id.
    for (std::size_t k = 0; k < cell_pairs.size(); ++k) {
      try {
        least_cost_path(raster, cell_pairs[k].first, cell_pairs[k].second);
      } catch (const NoRouteError&) {
        const std::string& a = terms[build.pairs[k].first].id;
        const std::string& b = terms[build.pairs[k].second].id;
        throw NoRouteError("no route between '" + a + "' and '" + b + "'", a,
                           b);
      }
    }
    throw;
  }

  // Union of route steps as an undirected cell graph.
  std::map<int, std::set<int>> adj;
  for (const RouteResult& r : build.routes) {
    for (std::size_t k = 1; k < r.cells.size(); ++k) {
      const int u = raster.index(r.cells[k - 1]);
      const int v = raster.index(r.cells[k]);
      adj[u].insert(v);
      adj[v].insert(u);
    }
  }

  // Kept cells: terminals first (input order), then junctions and dead ends
  // by cell index.
  std::map<int, int> node_of;  // cell index -> node index
  build.graph.nodes = terms;
  for (int i = 0; i < static_cast<int>(terms.size()); ++i) {
    node_of[raster.index(terms[i].cell)] = i;
  }
  auto add_transport = [&](int cell_index) {
    const Cell c = raster.cell(cell_index);
    node_of[cell_index] = build.graph.num_nodes();
    build.graph.nodes.push_back(
        {transport_id(c), NodeKind::kTransport, c, raster.center(c), {}});
  };
  for (const auto& [cell_index, nbrs] : adj) {
    if (nbrs.size() != 2 && !node_of.count(cell_index)) add_transport(cell_index);
  }

  // Walk chains between kept cells; each chain is recorded from its
  // lower-indexed end.
  std::vector<Chain> chains;
  for (const auto& [start_cell, start_node] : std::map<int, int>(node_of)) {
    for (int first : adj[start_cell]) {
      std::vector<Cell> cells{raster.cell(start_cell)};
      int prev = start_cell;
      int cur = first;
      while (!node_of.count(cur)) {
        cells.push_back(raster.cell(cur));
        const std::set<int>& nb = adj[cur];
        const int next = *nb.begin() != prev ? *nb.begin() : *nb.rbegin();
        prev = cur;
        cur = next;
      }
      cells.push_back(raster.cell(cur));
      const int end_node = node_of[cur];
      if (start_node < end_node) {
        chains.push_back({start_node, end_node, cells,
                          chain_length(cells, raster.cell_size())});
      }
    }
  }

  // Break parallel chains so every node pair carries at most one edge.
  std::sort(chains.begin(), chains.end(), [](const Chain& a, const Chain& b) {
    if (a.start != b.start) return a.start < b.start;
    if (a.end != b.end) return a.end < b.end;
    if (a.length != b.length) return a.length < b.length;
    return a.cells < b.cells;
  });
  std::vector<Chain> edges;
  for (std::size_t k = 0; k < chains.size(); ++k) {
    const Chain& ch = chains[k];
    const bool duplicate = k > 0 && chains[k - 1].start == ch.start &&
                           chains[k - 1].end == ch.end;
    if (!duplicate) {
      edges.push_back(ch);
      continue;
    }
    const std::size_t mid = ch.cells.size() / 2;
    add_transport(raster.index(ch.cells[mid]));
    const int m = build.graph.num_nodes() - 1;
    std::vector<Cell> left(ch.cells.begin(), ch.cells.begin() + mid + 1);
    std::vector<Cell> right(ch.cells.begin() + mid, ch.cells.end());
    edges.push_back(
        {ch.start, m, left, chain_length(left, raster.cell_size())});
    std::reverse(right.begin(), right.end());
    edges.push_back({ch.end, m, right, chain_length(right, raster.cell_size())});
  }
  for (Chain& e : edges) {
    if (e.start > e.end) {
      std::swap(e.start, e.end);
      std::reverse(e.cells.begin(), e.cells.end());
    }
  }
  std::sort(edges.begin(), edges.end(), [](const Chain& a, const Chain& b) {
    return std::tie(a.start, a.end) < std::tie(b.start, b.end);
  });

  for (const Chain& e : edges) {
    build.graph.arcs.push_back({e.start, e.end, e.length, e.cells});
    std::vector<Cell> rev(e.cells.rbegin(), e.cells.rend());
    build.graph.arcs.push_back({e.end, e.start, e.length, std::move(rev)});
  }
  build.graph.validate();
  return build;
}

nlohmann::ordered_json graph_to_json(const CandidateGraph& graph,
                                     const GridSpec& spec) {
  nlohmann::ordered_json doc;
  doc["projection"] = spec.projection;
  doc["cell_size_km"] = spec.cell_size;
  doc["origin"] = {spec.origin_x, spec.origin_y};
  doc["grid"] = {spec.width, spec.height};
  nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
  for (const GraphNode& n : graph.nodes) {
    nlohmann::ordered_json j;
    j["id"] = n.id;
    j["kind"] = std::string(to_string(n.kind));
    j["cell"] = {n.cell.row, n.cell.col};
    j["coordinates"] = {n.location.x, n.location.y};
    j["members"] = n.members;
    nodes.push_back(std::move(j));
  }
  doc["nodes"] = std::move(nodes);
  nlohmann::ordered_json arcs = nlohmann::ordered_json::array();
  for (const GraphArc& a : graph.arcs) {
    nlohmann::ordered_json j;
    j["from"] = graph.nodes[a.from].id;
    j["to"] = graph.nodes[a.to].id;
    j["length_km"] = a.length_km;
    nlohmann::ordered_json poly = nlohmann::ordered_json::array();
    for (const Cell& c : a.polyline) poly.push_back({c.row, c.col});
    j["polyline"] = std::move(poly);
    arcs.push_back(std::move(j));
  }
  doc["arcs"] = std::move(arcs);
  return doc;
}

CandidateGraph graph_from_json(const nlohmann::json& doc) {
  CandidateGraph g;
  try {
    std::map<std::string, int> index;
    for (const auto& j : doc.at("nodes")) {
      GraphNode n;
      n.id = j.at("id").get<std::string>();
      n.kind = node_kind_from_string(j.at("kind").get<std::string>());
      n.cell = {j.at("cell")[0].get<int>(), j.at("cell")[1].get<int>()};
      n.location = {j.at("coordinates")[0].get<double>(),
                    j.at("coordinates")[1].get<double>()};
      n.members = j.value("members", std::vector<std::string>{});
      index[n.id] = g.num_nodes();
      g.nodes.push_back(std::move(n));
    }
    for (const auto& j : doc.at("arcs")) {
      GraphArc a;
      const std::string from = j.at("from").get<std::string>();
      const std::string to = j.at("to").get<std::string>();
      if (!index.count(from) || !index.count(to)) {
        throw ValidationError("arc references unknown node " + from + "->" +
                              to);
      }
      a.from = index[from];
      a.to = index[to];
      a.length_km = j.at("length_km").get<double>();
      for (const auto& c : j.value("polyline", nlohmann::json::array())) {
        a.polyline.push_back({c[0].get<int>(), c[1].get<int>()});
      }
      g.arcs.push_back(std::move(a));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed graph document: ") + e.what());
  }
  g.validate();
  return g;
}

}  // namespace pipeplan
