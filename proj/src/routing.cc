#include "pipeplan/routing.h"

#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <queue>
#include <string>

#include "pipeplan/errors.h"

namespace pipeplan {
namespace {

// Neighbour offsets in lexicographic (row, col) order.
constexpr int kDr[8] = {-1, -1, -1, 0, 0, 1, 1, 1};
constexpr int kDc[8] = {-1, 0, 1, -1, 1, -1, 0, 1};

std::string cell_id(Cell c) {
  return "(" + std::to_string(c.row) + "," + std::to_string(c.col) + ")";
}

void check_inside(const RasterMap& raster, Cell c) {
  if (!raster.contains(c)) {
    throw ValidationError("cell " + cell_id(c) + " lies outside the grid");
  }
}

// Distances to `to`, settled at least for every cell no farther than `from`.
std::vector<double> distances_to(const RasterMap& raster, Cell to, Cell from) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(raster.num_cells(), inf);
  std::vector<char> done(raster.num_cells(), 0);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  const int target = raster.index(to);
  const int source = raster.index(from);
  dist[target] = 0.0;
  heap.push({0.0, target});
  while (!heap.empty()) {
    auto [d, i] = heap.top();
    heap.pop();
    if (done[i]) continue;
    done[i] = 1;
    if (i == source) break;
    const Cell u = raster.cell(i);
    for (int k = 0; k < 8; ++k) {
      const Cell v{u.row + kDr[k], u.col + kDc[k]};
      if (!raster.contains(v)) continue;
      const int j = raster.index(v);
      if (done[j] || raster.blocked(j)) continue;
      const double nd = d + step_penalty(raster, u, v);
      if (nd < dist[j]) {
        dist[j] = nd;
        heap.push({nd, j});
      }
    }
  }
  return dist;
}

}  // namespace

bool is_diagonal(Cell u, Cell v) {
  return u.row != v.row && u.col != v.col;
}

double step_penalty(const RasterMap& raster, Cell u, Cell v) {
  const double mean = 0.5 * (raster.multiplier(u) + raster.multiplier(v));
  const double w = raster.cell_size() * mean;
  return is_diagonal(u, v) ? w * std::numbers::sqrt2 : w;
}

RouteResult evaluate_path(const RasterMap& raster, std::vector<Cell> cells) {
  RouteResult r;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    check_inside(raster, cells[i]);
    if (i == 0) continue;
    const Cell u = cells[i - 1];
    const Cell v = cells[i];
    const int dr = std::abs(u.row - v.row);
    const int dc = std::abs(u.col - v.col);
    if (dr > 1 || dc > 1 || (dr == 0 && dc == 0)) {
      throw ValidationError("cells " + cell_id(u) + " and " + cell_id(v) +
                            " are not 8-neighbours");
    }
    r.penalty += step_penalty(raster, u, v);
    (dr && dc ? r.diagonal_steps : r.orthogonal_steps) += 1;
  }
  r.length_km = raster.cell_size() * (r.orthogonal_steps +
                                      r.diagonal_steps * std::numbers::sqrt2);
  r.cells = std::move(cells);
  return r;
}

RouteResult least_cost_path(const RasterMap& raster, Cell from, Cell to) {
  check_inside(raster, from);
  check_inside(raster, to);
  if (from == to) return {};
  if (raster.blocked(from) || raster.blocked(to)) {
    throw NoRouteError("no route: endpoint is blocked", cell_id(from),
                       cell_id(to));
  }
  const std::vector<double> dist = distances_to(raster, to, from);
  if (!std::isfinite(dist[raster.index(from)])) {
    throw NoRouteError("no route between " + cell_id(from) + " and " +
                           cell_id(to),
                       cell_id(from), cell_id(to));
  }
  // Greedy walk: the smallest neighbour that stays on some optimal path gives
  // the lexicographically smallest optimal cell sequence.
  std::vector<Cell> path{from};
  Cell u = from;
  const int guard = raster.num_cells();
  while (!(u == to)) {
    const double du = dist[raster.index(u)];
    const double eps = 1e-12 * (1.0 + du);
    bool moved = false;
    for (int k = 0; k < 8; ++k) {
      const Cell v{u.row + kDr[k], u.col + kDc[k]};
      if (!raster.contains(v)) continue;
      const int j = raster.index(v);
      if (raster.blocked(j) || !std::isfinite(dist[j])) continue;
      if (dist[j] + step_penalty(raster, u, v) <= du + eps && dist[j] < du) {
        u = v;
        moved = true;
        break;
      }
    }
    if (!moved || static_cast<int>(path.size()) > guard) {
      throw NoRouteError("route reconstruction failed", cell_id(from),
                         cell_id(to));
    }
    path.push_back(u);
  }
  return evaluate_path(raster, std::move(path));
}

std::vector<RouteResult> route_pairs(const RasterMap& raster,
                                     const std::vector<CellPair>& pairs) {
  const int n = static_cast<int>(pairs.size());
  std::vector<RouteResult> out(n);
  std::vector<std::exception_ptr> errors(n);
#pragma omp parallel for schedule(dynamic, 1)
  for (int i = 0; i < n; ++i) {
    try {
      out[i] = least_cost_path(raster, pairs[i].first, pairs[i].second);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

std::vector<RouteResult> route_pairs_serial(
    const RasterMap& raster, const std::vector<CellPair>& pairs) {
  std::vector<RouteResult> out;
  out.reserve(pairs.size());
  for (const auto& [a, b] : pairs) out.push_back(least_cost_path(raster, a, b));
  return out;
}

}  // namespace pipeplan
