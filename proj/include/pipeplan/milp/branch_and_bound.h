// Built-in LP-based branch-and-bound backend.
//
// Search order: depth-first dives that reuse the live simplex tableau, and
// best-bound selection when a dive ends (the node is rebuilt from its parent's
// stored basis). With native indicators the indicator row is carried as a
// free row and becomes active once its binary is fixed to 1; a solution with
// an unfixed binary at 1 that violates its row is branched on like a
// fractional variable.

#ifndef PIPEPLAN_MILP_BRANCH_AND_BOUND_H_
#define PIPEPLAN_MILP_BRANCH_AND_BOUND_H_

#include "pipeplan/milp/solver.h"

namespace pipeplan::milp {

class BranchAndBoundSolver final : public SolverAdapter {
 public:
  explicit BranchAndBoundSolver(bool native_indicators)
      : native_indicators_(native_indicators) {}

  std::string name() const override {
    return native_indicators_ ? "builtin" : "builtin-bigm";
  }
  SolverCapabilities capabilities() const override {
    return {native_indicators_, true};
  }
  SolveResult solve(const Model& model, const SolveOptions& options,
                    std::span<const double> hint = {}) override;

 private:
  bool native_indicators_;
};

}  // namespace pipeplan::milp

#endif  // PIPEPLAN_MILP_BRANCH_AND_BOUND_H_
