#include "pipeplan/milp/branch_and_bound.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <queue>

#include "pipeplan/errors.h"
#include "pipeplan/milp/simplex.h"

namespace pipeplan::milp {
namespace {

constexpr double kIntTol = 1e-6;
constexpr double kFeasTol = 1e-6;
constexpr double kInf = std::numeric_limits<double>::infinity();

using Clock = std::chrono::steady_clock;

struct OpenNode {
  std::vector<double> lower;
  std::vector<double> upper;
  LpBasis basis;
  double bound = 0.0;
  long seq = 0;
};

struct WorseNode {
  bool operator()(const OpenNode& a, const OpenNode& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.seq < b.seq;  // newer first among equal bounds
  }
};

struct Branch {
  int var = -1;
  double value = 0.0;
};

class Search {
 public:
  Search(const Model& model, const SolveOptions& options, bool native)
      : model_(model), options_(options), native_(native) {
    build_lp();
  }

  SolveResult run(std::span<const double> hint) {
    start_ = Clock::now();
    std::vector<double> lower = root_lower_;
    std::vector<double> upper = root_upper_;
    if (!hint.empty()) seed_from_hint(hint);
    search(lower, upper);
    return finish();
  }

  // Restricted search used to complete partial hints.
  SolveResult run_restricted(std::vector<double> lower,
                             std::vector<double> upper) {
    start_ = Clock::now();
    for (int j = 0; j < n_; ++j) sync_indicator_rows(j, lower, upper);
    search(lower, upper);
    return finish();
  }

  const std::vector<double>& root_lower() const { return root_lower_; }
  const std::vector<double>& root_upper() const { return root_upper_; }

 private:
  void build_lp() {
    n_ = model_.num_variables();
    const int rows = model_.num_constraints() +
                     (native_ ? model_.num_indicators() : 0);
    LpData data;
    data.rows = rows;
    data.cols = n_;
    data.matrix.assign(static_cast<std::size_t>(rows) * n_, 0.0);
    data.cost.assign(n_, 0.0);
    for (const Term& t : model_.objective().terms()) data.cost[t.var] += t.coef;
    data.lower.assign(n_ + rows, 0.0);
    data.upper.assign(n_ + rows, 0.0);
    for (int j = 0; j < n_; ++j) {
      data.lower[j] = model_.variable(j).lower;
      data.upper[j] = model_.variable(j).upper;
    }
    int r = 0;
    auto fill = [&](const Constraint& c) {
      for (const Term& t : c.terms) {
        data.matrix[static_cast<std::size_t>(r) * n_ + t.var] += t.coef;
      }
      row_sense_.push_back(c.sense);
      row_rhs_.push_back(c.rhs);
      ++r;
    };
    for (const Constraint& c : model_.constraints()) {
      fill(c);
      set_row_bounds(data.lower, data.upper, r - 1, true);
    }
    indicator_of_binary_.assign(n_, {});
    if (native_) {
      for (int k = 0; k < model_.num_indicators(); ++k) {
        const IndicatorConstraint& ind = model_.indicators()[k];
        indicator_row_.push_back(r);
        indicator_of_binary_[ind.binary].push_back(k);
        fill(ind.row);
        const bool active = model_.variable(ind.binary).lower >= 0.5;
        set_row_bounds(data.lower, data.upper, r - 1, active);
      }
    }
    root_lower_ = data.lower;
    root_upper_ = data.upper;
    lp_data_ = std::move(data);
  }

  void set_row_bounds(std::vector<double>& lower, std::vector<double>& upper,
                      int row, bool active) const {
    const int v = n_ + row;
    if (!active) {
      lower[v] = -kInf;
      upper[v] = kInf;
      return;
    }
    switch (row_sense_[row]) {
      case Sense::kLessEqual:
        lower[v] = -kInf;
        upper[v] = row_rhs_[row];
        break;
      case Sense::kGreaterEqual:
        lower[v] = row_rhs_[row];
        upper[v] = kInf;
        break;
      case Sense::kEqual:
        lower[v] = upper[v] = row_rhs_[row];
        break;
    }
  }

  // Keeps indicator rows of `var` consistent with its bounds. Returns the
  // logical variables whose bounds changed.
  std::vector<int> sync_indicator_rows(int var, std::vector<double>& lower,
                                       std::vector<double>& upper) const {
    std::vector<int> changed;
    if (!native_ || var >= n_) return changed;
    for (int k : indicator_of_binary_[var]) {
      const int row = indicator_row_[k];
      const double old_lo = lower[n_ + row];
      const double old_up = upper[n_ + row];
      set_row_bounds(lower, upper, row, lower[var] >= 0.5);
      if (lower[n_ + row] != old_lo || upper[n_ + row] != old_up) {
        changed.push_back(n_ + row);
      }
    }
    return changed;
  }

  double elapsed() const {
    return std::chrono::duration<double>(Clock::now() - start_).count();
  }

  bool out_of_time() const {
    return elapsed() > options_.time_limit_seconds;
  }

  bool out_of_nodes() const {
    return options_.node_limit >= 0 && nodes_ >= options_.node_limit;
  }

  double cutoff() const {
    if (!has_incumbent_) return kInf;
    const double tol = std::max(options_.absolute_gap,
                                options_.relative_gap * std::abs(incumbent_obj_));
    return incumbent_obj_ - tol;
  }

  void offer(std::vector<double> x) {
    for (int j = 0; j < n_; ++j) {
      if (model_.is_integer(j)) x[j] = std::round(x[j]);
    }
    if (!model_.is_feasible(x, kFeasTol)) return;
    const double obj = model_.objective_value(x);
    if (!has_incumbent_ || obj < incumbent_obj_) {
      incumbent_ = std::move(x);
      incumbent_obj_ = obj;
      has_incumbent_ = true;
    }
  }

  void seed_from_hint(std::span<const double> hint) {
    if (static_cast<int>(hint.size()) != n_) {
      throw ParameterError("hint size does not match the model");
    }
    const bool complete = std::none_of(hint.begin(), hint.end(),
                                       [](double v) { return std::isnan(v); });
    if (complete) {
      offer(std::vector<double>(hint.begin(), hint.end()));
      if (has_incumbent_) return;
    }
    std::vector<double> lower = root_lower_;
    std::vector<double> upper = root_upper_;
    bool any = false;
    for (int j = 0; j < n_; ++j) {
      if (std::isnan(hint[j]) || !model_.is_integer(j)) continue;
      const double v = std::clamp(std::round(hint[j]), lower[j], upper[j]);
      lower[j] = upper[j] = v;
      any = true;
    }
    if (!any) return;
    SolveOptions sub = options_;
    sub.node_limit = 5000;
    sub.time_limit_seconds = std::max(0.0, options_.time_limit_seconds / 4);
    Search restricted(model_, sub, native_);
    SolveResult r = restricted.run_restricted(lower, upper);
    if (r.has_solution()) offer(std::move(r.values));
    lp_iterations_ += r.lp_iterations;
  }

  // Returns the branching variable, or var = -1 if the LP point is a
  // solution of the MILP.
  Branch pick_branch(std::span<const double> x,
                     const std::vector<double>& lower) const {
    Branch best;
    int best_priority = std::numeric_limits<int>::min();
    double best_score = -1.0;
    auto consider = [&](int j, double score) {
      const int pr = model_.variable(j).priority;
      if (pr > best_priority || (pr == best_priority && score > best_score)) {
        best_priority = pr;
        best_score = score;
        best = {j, x[j]};
      }
    };
    for (int j = 0; j < n_; ++j) {
      if (!model_.is_integer(j)) continue;
      const double frac = x[j] - std::floor(x[j]);
      if (frac <= kIntTol || frac >= 1.0 - kIntTol) continue;
      consider(j, 0.5 - std::abs(frac - 0.5));
    }
    if (!native_) return best;
    // A binary at 1 whose indicator row is violated is branched like a
    // fractional one, with the lowest score in its priority class.
    for (int k = 0; k < model_.num_indicators(); ++k) {
      const IndicatorConstraint& ind = model_.indicators()[k];
      if (lower[ind.binary] >= 0.5) continue;  // already enforced
      if (x[ind.binary] < 0.5) continue;
      if (ind.row.violation(x) > kFeasTol * (1.0 + std::abs(ind.row.rhs))) {
        consider(ind.binary, 0.0);
      }
    }
    return best;
  }

  void search(std::vector<double> lower, std::vector<double> upper) {
    DualSimplex lp(lp_data_);
    for (int j = 0; j < n_ + static_cast<int>(row_sense_.size()); ++j) {
      lp.set_bounds(j, lower[j], upper[j]);
    }
    LpStatus status = lp.solve();
    ++nodes_;
    std::priority_queue<OpenNode, std::vector<OpenNode>, WorseNode> open;
    long seq = 0;
    const double obj_const = model_.objective().constant();

    while (true) {
      bool dive_ends = true;
      if (status == LpStatus::kIterationLimit) {
        status = lp.solve();
        if (status == LpStatus::kIterationLimit) incomplete_ = true;
      }
      if (status == LpStatus::kUnbounded) {
        incomplete_ = true;
      } else if (status == LpStatus::kOptimal) {
        const double obj = lp.objective() + obj_const;
        if (obj < cutoff()) {
          std::vector<double> x(lp.values().begin(), lp.values().end());
          const Branch br = pick_branch(x, lower);
          if (br.var < 0) {
            offer(std::move(x));
          } else {
            double down_ub = std::floor(br.value);
            double up_lb = down_ub + 1.0;
            bool prefer_up = br.value - down_ub >= 0.5;
            if (std::abs(br.value - std::round(br.value)) <= kIntTol) {
              // Integral binary whose indicator row is violated.
              up_lb = std::round(br.value);
              down_ub = up_lb - 1.0;
              prefer_up = true;
            }
            OpenNode other;
            other.lower = lower;
            other.upper = upper;
            other.basis = lp.basis();
            other.bound = obj;
            other.seq = seq++;
            if (prefer_up) {
              other.upper[br.var] = down_ub;
              lower[br.var] = up_lb;
            } else {
              other.lower[br.var] = up_lb;
              upper[br.var] = down_ub;
            }
            sync_indicator_rows(br.var, other.lower, other.upper);
            open.push(std::move(other));
            lp.set_bounds(br.var, lower[br.var], upper[br.var]);
            for (int v : sync_indicator_rows(br.var, lower, upper)) {
              lp.set_bounds(v, lower[v], upper[v]);
            }
            dive_ends = false;
          }
        }
      }

      if (out_of_time() || out_of_nodes()) {
        if (!dive_ends) open_bound_ = std::min(open_bound_, lp.objective() + obj_const);
        while (!open.empty()) {
          open_bound_ = std::min(open_bound_, open.top().bound);
          open.pop();
        }
        stopped_by_time_ = out_of_time();
        limit_hit_ = true;
        break;
      }

      if (!dive_ends) {
        status = lp.reoptimize();
        ++nodes_;
        continue;
      }

      // Next node: best bound among open nodes that survive the cutoff.
      bool found = false;
      while (!open.empty()) {
        OpenNode node = open.top();
        open.pop();
        if (node.bound >= cutoff()) continue;
        lower = std::move(node.lower);
        upper = std::move(node.upper);
        status = lp.solve_from(node.basis, lower, upper);
        ++nodes_;
        found = true;
        break;
      }
      if (!found) break;
    }
    lp_iterations_ += lp.iterations();
  }

  SolveResult finish() const {
    SolveResult r;
    r.nodes = nodes_;
    r.lp_iterations = lp_iterations_;
    r.seconds = elapsed();
    if (has_incumbent_) {
      r.values = incumbent_;
      r.objective = incumbent_obj_;
    }
    if (!limit_hit_ && !incomplete_) {
      if (has_incumbent_) {
        r.status = SolveStatus::kOptimal;
        r.bound = incumbent_obj_;
      } else {
        r.status = SolveStatus::kInfeasible;
        r.bound = kInf;
      }
    } else {
      r.bound = has_incumbent_ ? std::min(open_bound_, incumbent_obj_)
                               : open_bound_;
      if (stopped_by_time_ || !has_incumbent_) {
        r.status = SolveStatus::kTimeLimit;
      } else {
        r.status = SolveStatus::kFeasible;
      }
    }
    if (has_incumbent_) {
      const double denom = std::max(1e-10, std::abs(r.objective));
      r.gap = std::max(0.0, (r.objective - r.bound) / denom);
    } else {
      r.gap = kInf;
    }
    return r;
  }

  const Model& model_;
  SolveOptions options_;
  bool native_;
  int n_ = 0;
  LpData lp_data_;
  std::vector<Sense> row_sense_;
  std::vector<double> row_rhs_;
  std::vector<int> indicator_row_;
  std::vector<std::vector<int>> indicator_of_binary_;
  std::vector<double> root_lower_;
  std::vector<double> root_upper_;

  Clock::time_point start_;
  long nodes_ = 0;
  long lp_iterations_ = 0;
  bool has_incumbent_ = false;
  std::vector<double> incumbent_;
  double incumbent_obj_ = kInf;
  double open_bound_ = kInf;
  bool limit_hit_ = false;
  bool stopped_by_time_ = false;
  bool incomplete_ = false;
};

}  // namespace

SolveResult BranchAndBoundSolver::solve(const Model& model,
                                        const SolveOptions& options,
                                        std::span<const double> hint) {
  if (!native_indicators_ && model.num_indicators() > 0) {
    throw ParameterError(
        "backend builtin-bigm has no native indicators; linearise first");
  }
  Search search(model, options, native_indicators_);
  return search.run(hint);
}

}  // namespace pipeplan::milp
