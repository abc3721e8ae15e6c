// Exhaustive simple-path search on small rasters with exact arithmetic.
//
// Multipliers must be integers. A path cost is (cell_size / 2) * (A + B*sqrt2)
// with integer A (orthogonal steps) and B (diagonal steps), each step adding
// mult(u) + mult(v). Costs are compared exactly, so ties are real ties.

#ifndef PIPEPLAN_TESTS_ORACLE_PATH_ORACLE_H_
#define PIPEPLAN_TESTS_ORACLE_PATH_ORACLE_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace oracle {

struct ExactCost {
  std::int64_t a = 0;
  std::int64_t b = 0;

  double approx() const { return a + b * std::sqrt(2.0); }
};

// a1 + b1*sqrt2 < a2 + b2*sqrt2, decided in integers.
inline bool less(const ExactCost& p, const ExactCost& q) {
  const std::int64_t x = p.a - q.a;  // need x < y * sqrt2
  const std::int64_t y = q.b - p.b;
  if (y >= 0) return x < 0 || x * x < 2 * y * y;
  return x < 0 && x * x > 2 * y * y;
}

inline bool equal(const ExactCost& p, const ExactCost& q) {
  return p.a == q.a && p.b == q.b;
}

struct GridCell {
  int r;
  int c;
  bool operator==(const GridCell&) const = default;
};

class PathEnumerator {
 public:
  // mult is row-major, integer valued.
  PathEnumerator(int width, int height, std::vector<int> mult)
      : w_(width), h_(height), mult_(std::move(mult)) {
    min_mult_ = std::numeric_limits<int>::max();
    for (int m : mult_) min_mult_ = std::min(min_mult_, m);
  }

  ExactCost step(GridCell u, GridCell v) const {
    const std::int64_t s = mult_[u.r * w_ + u.c] + mult_[v.r * w_ + v.c];
    return (u.r != v.r && u.c != v.c) ? ExactCost{0, s} : ExactCost{s, 0};
  }

  ExactCost cost_of(const std::vector<GridCell>& path) const {
    ExactCost t;
    for (std::size_t i = 1; i < path.size(); ++i) {
      ExactCost s = step(path[i - 1], path[i]);
      t.a += s.a;
      t.b += s.b;
    }
    return t;
  }

  // Minimum over every simple path; `best_path` is the lexicographically
  // smallest (row, col) sequence attaining it. Depth-first in lexicographic
  // neighbour order, pruned by an admissible octile bound.
  ExactCost solve(GridCell from, GridCell to) {
    to_ = to;
    best_ = {};
    found_ = false;
    best_path_.clear();
    std::vector<char> on_path(w_ * h_, 0);
    std::vector<GridCell> path{from};
    on_path[from.r * w_ + from.c] = 1;
    if (from == to) {
      best_path_.clear();
      found_ = true;
      return {};
    }
    dfs(path, on_path, {});
    return best_;
  }

  const std::vector<GridCell>& best_path() const { return best_path_; }
  bool found() const { return found_; }

 private:
  double bound(GridCell u) const {
    const int dr = std::abs(u.r - to_.r);
    const int dc = std::abs(u.c - to_.c);
    const int diag = std::min(dr, dc);
    const int orth = std::max(dr, dc) - diag;
    return 2.0 * min_mult_ * (orth + diag * std::sqrt(2.0));
  }

  void dfs(std::vector<GridCell>& path, std::vector<char>& on_path,
           ExactCost cost) {
    const GridCell u = path.back();
    if (u == to_) {
      if (!found_ || less(cost, best_)) {
        best_ = cost;
        best_path_ = path;
        found_ = true;
      }
      return;
    }
    if (found_ && cost.approx() + bound(u) > best_.approx() + 1e-9) return;
    for (int dr = -1; dr <= 1; ++dr) {
      for (int dc = -1; dc <= 1; ++dc) {
        if (dr == 0 && dc == 0) continue;
        const GridCell v{u.r + dr, u.c + dc};
        if (v.r < 0 || v.r >= h_ || v.c < 0 || v.c >= w_) continue;
        if (on_path[v.r * w_ + v.c]) continue;
        const ExactCost s = step(u, v);
        on_path[v.r * w_ + v.c] = 1;
        path.push_back(v);
        dfs(path, on_path, {cost.a + s.a, cost.b + s.b});
        path.pop_back();
        on_path[v.r * w_ + v.c] = 0;
      }
    }
  }

  int w_;
  int h_;
  std::vector<int> mult_;
  int min_mult_;
  GridCell to_{};
  ExactCost best_;
  bool found_ = false;
  std::vector<GridCell> best_path_;
};

}  // namespace oracle

#endif  // PIPEPLAN_TESTS_ORACLE_PATH_ORACLE_H_
