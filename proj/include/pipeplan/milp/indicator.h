// Big-M realisation of indicator rows for backends without native support.

#ifndef PIPEPLAN_MILP_INDICATOR_H_
#define PIPEPLAN_MILP_INDICATOR_H_

#include <vector>

#include "pipeplan/milp/model.h"

namespace pipeplan::milp {

// Range of sum(coef * var) implied by the variable bounds.
struct ActivityBounds {
  double lower = 0.0;
  double upper = 0.0;
};

ActivityBounds activity_bounds(const std::vector<Term>& terms,
                               const std::vector<Variable>& variables);

// Rows encoding "binary = 1 => row". For the <= side:
//   a.x + M_up * z <= rhs + M_up,  M_up = max(0, max(a.x) - rhs)
// and symmetrically for >=; equality rows yield both. M comes from the
// variable bounds only. Throws ParameterError naming the row when a needed
// side of a.x is unbounded.
std::vector<Constraint> linearize_indicator(
    const IndicatorConstraint& indicator,
    const std::vector<Variable>& variables);

// Copy of `model` with every indicator replaced by its big-M rows.
Model linearize_indicators(const Model& model);

}  // namespace pipeplan::milp

#endif  // PIPEPLAN_MILP_INDICATOR_H_
