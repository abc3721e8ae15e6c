#include "pipeplan/milp/solver.h"

#include "pipeplan/errors.h"
#include "pipeplan/milp/branch_and_bound.h"
#include "pipeplan/milp/indicator.h"

namespace pipeplan::milp {

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal:
      return "OPTIMAL";
    case SolveStatus::kFeasible:
      return "FEASIBLE";
    case SolveStatus::kInfeasible:
      return "INFEASIBLE";
    case SolveStatus::kTimeLimit:
      return "TIME_LIMIT";
  }
  return "UNKNOWN";
}

std::unique_ptr<SolverAdapter> make_solver(std::string_view backend) {
  if (backend == "builtin") {
    return std::make_unique<BranchAndBoundSolver>(true);
  }
  if (backend == "builtin-bigm") {
    return std::make_unique<BranchAndBoundSolver>(false);
  }
  throw ParameterError("unknown solver backend '" + std::string(backend) +
                       "' (expected builtin or builtin-bigm)");
}

SolveResult solve_model(SolverAdapter& solver, const Model& model,
                        const SolveOptions& options,
                        std::span<const double> hint) {
  if (model.num_indicators() > 0 && !solver.capabilities().native_indicators) {
    const Model linear = linearize_indicators(model);
    return solver.solve(linear, options, hint);
  }
  return solver.solve(model, options, hint);
}

}  // namespace pipeplan::milp
