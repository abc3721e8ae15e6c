// Delaunay edge set of a planar point set (Bowyer-Watson).

#ifndef PIPEPLAN_TRIANGULATION_H_
#define PIPEPLAN_TRIANGULATION_H_

#include <array>
#include <utility>
#include <vector>

#include "pipeplan/raster.h"

namespace pipeplan {

// Undirected edge (i < j) between input point indices.
using IndexEdge = std::pair<int, int>;

// Sorted, unique Delaunay edges. With fewer than 3 points or all points
// collinear, returns the chain linking each point to its neighbour along the
// line. Points are inserted in index order, which fixes the diagonal chosen
// for co-circular quadruples. Throws ValidationError on < 2 points or
// duplicate coordinates.
std::vector<IndexEdge> triangulate(const std::vector<Point>& points);

// Triangles (index triples, counter-clockwise) of the same triangulation;
// empty for the degenerate chain case.
std::vector<std::array<int, 3>> delaunay_triangles(
    const std::vector<Point>& points);

}  // namespace pipeplan

#endif  // PIPEPLAN_TRIANGULATION_H_
