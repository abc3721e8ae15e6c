// Least-cost 8-connected routing on a penalty raster.
//
// A step between neighbouring cells u, v costs
//   cell_size * (mult(u) + mult(v)) / 2        orthogonal
//   cell_size * (mult(u) + mult(v)) / 2 * sqrt2 diagonal.
// Among equal-penalty paths the lexicographically smallest (row, col) cell
// sequence is returned.

#ifndef PIPEPLAN_ROUTING_H_
#define PIPEPLAN_ROUTING_H_

#include <utility>
#include <vector>

#include "pipeplan/raster.h"

namespace pipeplan {

struct RouteResult {
  std::vector<Cell> cells;  // from .. to inclusive; empty when from == to
  double penalty = 0.0;
  double length_km = 0.0;
  int orthogonal_steps = 0;
  int diagonal_steps = 0;
};

// Step weight between two 8-neighbours.
double step_penalty(const RasterMap& raster, Cell u, Cell v);
bool is_diagonal(Cell u, Cell v);

// Throws ValidationError for cells outside the grid and NoRouteError when the
// target is unreachable (blocked cells).
RouteResult least_cost_path(const RasterMap& raster, Cell from, Cell to);

// Sum of step penalties and geographic length of an explicit cell path.
// Throws ValidationError when consecutive cells are not 8-neighbours.
RouteResult evaluate_path(const RasterMap& raster, std::vector<Cell> cells);

using CellPair = std::pair<Cell, Cell>;

// One route per pair, concurrently over pairs (read-only raster). The first
// failing pair (in input order) is rethrown.
std::vector<RouteResult> route_pairs(const RasterMap& raster,
                                     const std::vector<CellPair>& pairs);
// Serial reference with identical results.
std::vector<RouteResult> route_pairs_serial(const RasterMap& raster,
                                            const std::vector<CellPair>& pairs);

}  // namespace pipeplan

#endif  // PIPEPLAN_ROUTING_H_
