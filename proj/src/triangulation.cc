#include "pipeplan/triangulation.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "pipeplan/errors.h"

namespace pipeplan {
namespace {

using Real = long double;

struct P {
  Real x;
  Real y;
};

Real orient(const P& a, const P& b, const P& c) {
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

// > 0 when d lies strictly inside the circumcircle of counter-clockwise abc.
Real incircle(const P& a, const P& b, const P& c, const P& d) {
  const Real adx = a.x - d.x, ady = a.y - d.y;
  const Real bdx = b.x - d.x, bdy = b.y - d.y;
  const Real cdx = c.x - d.x, cdy = c.y - d.y;
  const Real ad = adx * adx + ady * ady;
  const Real bd = bdx * bdx + bdy * bdy;
  const Real cd = cdx * cdx + cdy * cdy;
  return adx * (bdy * cd - bd * cdy) - ady * (bdx * cd - bd * cdx) +
         ad * (bdx * cdy - bdy * cdx);
}

void check_input(const std::vector<Point>& points) {
  if (points.size() < 2) {
    throw ValidationError("triangulation needs at least 2 points");
  }
  std::vector<Point> sorted = points;
  std::sort(sorted.begin(), sorted.end(), [](const Point& a, const Point& b) {
    return a.x != b.x ? a.x < b.x : a.y < b.y;
  });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i] == sorted[i - 1]) {
      throw ValidationError("duplicate point in triangulation input; merge "
                            "co-located nodes first");
    }
  }
}

// Points centred on their bounding box and scaled into [-1, 1].
std::vector<P> normalise(const std::vector<Point>& points) {
  double xmin = points[0].x, xmax = xmin, ymin = points[0].y, ymax = ymin;
  for (const Point& p : points) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  const Real cx = 0.5L * (Real(xmin) + xmax);
  const Real cy = 0.5L * (Real(ymin) + ymax);
  const Real half = std::max<Real>(0.5L * (Real(xmax) - xmin),
                                   0.5L * (Real(ymax) - ymin));
  std::vector<P> out;
  out.reserve(points.size());
  for (const Point& p : points) {
    out.push_back({(p.x - cx) / half, (p.y - cy) / half});
  }
  return out;
}

bool all_collinear(const std::vector<P>& pts) {
  // Anchor on the two points farthest apart along the bounding-box diagonal.
  std::size_t a = 0, b = 0;
  Real best = -1;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const Real dx = pts[i].x - pts[j].x, dy = pts[i].y - pts[j].y;
      if (dx * dx + dy * dy > best) {
        best = dx * dx + dy * dy;
        a = i;
        b = j;
      }
    }
  }
  for (const P& p : pts) {
    if (std::abs(orient(pts[a], pts[b], p)) > 1e-12L) return false;
  }
  return true;
}

std::vector<IndexEdge> chain(const std::vector<P>& pts) {
  std::size_t a = 0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (pts[i].x < pts[a].x || (pts[i].x == pts[a].x && pts[i].y < pts[a].y)) {
      a = i;
    }
  }
  std::size_t b = a;
  Real far = -1;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Real dx = pts[i].x - pts[a].x, dy = pts[i].y - pts[a].y;
    if (dx * dx + dy * dy > far) {
      far = dx * dx + dy * dy;
      b = i;
    }
  }
  const Real ux = pts[b].x - pts[a].x, uy = pts[b].y - pts[a].y;
  std::vector<int> order(pts.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    const Real ti = (pts[i].x - pts[a].x) * ux + (pts[i].y - pts[a].y) * uy;
    const Real tj = (pts[j].x - pts[a].x) * ux + (pts[j].y - pts[a].y) * uy;
    return ti != tj ? ti < tj : i < j;
  });
  std::vector<IndexEdge> edges;
  for (std::size_t k = 1; k < order.size(); ++k) {
    edges.emplace_back(std::min(order[k - 1], order[k]),
                       std::max(order[k - 1], order[k]));
  }
  std::sort(edges.begin(), edges.end());
  return edges;
}

std::vector<std::array<int, 3>> bowyer_watson(const std::vector<P>& input) {
  const int n = static_cast<int>(input.size());
  std::vector<P> pts = input;
  const Real big = 1e6L;
  pts.push_back({-3 * big, -3 * big});
  pts.push_back({3 * big, 0});
  pts.push_back({0, 3 * big});
  std::vector<std::array<int, 3>> tris{{n, n + 1, n + 2}};
  for (int i = 0; i < n; ++i) {
    const P& p = pts[i];
    std::vector<std::array<int, 3>> keep;
    std::map<std::pair<int, int>, int> boundary;  // directed edge -> count
    for (const auto& t : tris) {
      if (incircle(pts[t[0]], pts[t[1]], pts[t[2]], p) > 0) {
        for (int e = 0; e < 3; ++e) {
          const int u = t[e], v = t[(e + 1) % 3];
          auto rev = boundary.find({v, u});
          if (rev != boundary.end()) {
            boundary.erase(rev);
          } else {
            boundary[{u, v}] = 1;
          }
        }
      } else {
        keep.push_back(t);
      }
    }
    for (const auto& [edge, count] : boundary) {
      (void)count;
      keep.push_back({edge.first, edge.second, i});
    }
    tris = std::move(keep);
  }
  std::vector<std::array<int, 3>> out;
  for (const auto& t : tris) {
    if (t[0] < n && t[1] < n && t[2] < n) out.push_back(t);
  }
  return out;
}

// Convex hull edges between consecutive hull points, collinear boundary
// points included, so hull edges lost to a finite super-triangle come back.
std::vector<IndexEdge> hull_edges(const std::vector<P>& pts) {
  const int n = static_cast<int>(pts.size());
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    return pts[a].x != pts[b].x ? pts[a].x < pts[b].x : pts[a].y < pts[b].y;
  });
  std::vector<int> hull;
  auto build = [&](auto begin, auto end) {
    const std::size_t base = hull.size();
    for (auto it = begin; it != end; ++it) {
      while (hull.size() >= base + 2 &&
             orient(pts[hull[hull.size() - 2]], pts[hull.back()], pts[*it]) <
                 0) {
        hull.pop_back();
      }
      hull.push_back(*it);
    }
  };
  build(idx.begin(), idx.end());
  hull.pop_back();
  build(idx.rbegin(), idx.rend());
  hull.pop_back();
  std::vector<IndexEdge> edges;
  for (std::size_t k = 0; k < hull.size(); ++k) {
    const int a = hull[k], b = hull[(k + 1) % hull.size()];
    if (a != b) edges.emplace_back(std::min(a, b), std::max(a, b));
  }
  return edges;
}

}  // namespace

std::vector<std::array<int, 3>> delaunay_triangles(
    const std::vector<Point>& points) {
  check_input(points);
  const std::vector<P> pts = normalise(points);
  if (points.size() < 3 || all_collinear(pts)) return {};
  return bowyer_watson(pts);
}

std::vector<IndexEdge> triangulate(const std::vector<Point>& points) {
  check_input(points);
  const std::vector<P> pts = normalise(points);
  if (points.size() < 3 || all_collinear(pts)) return chain(pts);
  std::set<IndexEdge> edges;
  for (const auto& t : bowyer_watson(pts)) {
    for (int e = 0; e < 3; ++e) {
      const int u = t[e], v = t[(e + 1) % 3];
      edges.emplace(std::min(u, v), std::max(u, v));
    }
  }
  for (const IndexEdge& e : hull_edges(pts)) edges.insert(e);
  return {edges.begin(), edges.end()};
}

}  // namespace pipeplan
