// Solver adapter: the only surface the planning layer talks to.

#ifndef PIPEPLAN_MILP_SOLVER_H_
#define PIPEPLAN_MILP_SOLVER_H_

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pipeplan/milp/model.h"

namespace pipeplan::milp {

enum class SolveStatus {
  kOptimal,     // incumbent within the requested gap
  kFeasible,    // stopped on a work limit with an incumbent
  kInfeasible,  // proven infeasible
  kTimeLimit,   // stopped on the time limit (incumbent may be absent)
};

std::string_view to_string(SolveStatus status);

struct SolverCapabilities {
  bool native_indicators = false;
  bool warm_start = false;
};

struct SolveOptions {
  double time_limit_seconds = 600.0;
  double relative_gap = 1e-9;
  double absolute_gap = 1e-9;
  long node_limit = -1;  // < 0: unlimited
  int threads = 1;
  // Fixed seed; the built-in backend is deterministic and ignores it.
  unsigned seed = 0;
};

struct SolveResult {
  SolveStatus status = SolveStatus::kInfeasible;
  std::vector<double> values;  // empty when no incumbent
  double objective = 0.0;
  double bound = 0.0;
  double gap = 0.0;
  long nodes = 0;
  long lp_iterations = 0;
  double seconds = 0.0;

  bool has_solution() const { return !values.empty(); }
};

// Hint: one entry per model variable, NaN for "no hint". A complete feasible
// hint becomes the starting incumbent; a partial one fixes the hinted integer
// variables in a short sub-search that seeds the incumbent.
using Hint = std::vector<double>;

class SolverAdapter {
 public:
  virtual ~SolverAdapter() = default;
  virtual std::string name() const = 0;
  virtual SolverCapabilities capabilities() const = 0;
  virtual SolveResult solve(const Model& model, const SolveOptions& options,
                            std::span<const double> hint = {}) = 0;
};

// "builtin" (native indicators) or "builtin-bigm" (indicators rejected, so
// they are linearised by solve_model). Throws ParameterError otherwise.
std::unique_ptr<SolverAdapter> make_solver(std::string_view backend);

// Solves `model` on `solver`, linearising indicators first when the backend
// lacks native support. Linearisation only appends rows, so variable indices
// and hints are unchanged.
SolveResult solve_model(SolverAdapter& solver, const Model& model,
                        const SolveOptions& options,
                        std::span<const double> hint = {});

}  // namespace pipeplan::milp

#endif  // PIPEPLAN_MILP_SOLVER_H_
