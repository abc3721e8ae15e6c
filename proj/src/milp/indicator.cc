#include "pipeplan/milp/indicator.h"

#include <algorithm>
#include <cmath>

#include "pipeplan/errors.h"

namespace pipeplan::milp {

ActivityBounds activity_bounds(const std::vector<Term>& terms,
                               const std::vector<Variable>& variables) {
  ActivityBounds b;
  for (const Term& t : terms) {
    const Variable& v = variables[t.var];
    if (t.coef > 0.0) {
      b.lower += t.coef * v.lower;
      b.upper += t.coef * v.upper;
    } else {
      b.lower += t.coef * v.upper;
      b.upper += t.coef * v.lower;
    }
  }
  return b;
}

std::vector<Constraint> linearize_indicator(
    const IndicatorConstraint& indicator,
    const std::vector<Variable>& variables) {
  const Constraint& row = indicator.row;
  const ActivityBounds range = activity_bounds(row.terms, variables);
  std::vector<Constraint> out;

  const bool need_upper =
      row.sense == Sense::kLessEqual || row.sense == Sense::kEqual;
  const bool need_lower =
      row.sense == Sense::kGreaterEqual || row.sense == Sense::kEqual;

  if (need_upper) {
    if (!std::isfinite(range.upper)) {
      throw ParameterError("big-M: row " + row.name +
                           " is unbounded above; add finite variable bounds");
    }
    const double m = std::max(0.0, range.upper - row.rhs);
    Constraint c{row.name + "_bigm_up", row.terms, Sense::kLessEqual,
                 row.rhs + m};
    c.terms.push_back({indicator.binary, m});
    out.push_back(std::move(c));
  }
  if (need_lower) {
    if (!std::isfinite(range.lower)) {
      throw ParameterError("big-M: row " + row.name +
                           " is unbounded below; add finite variable bounds");
    }
    const double m = std::max(0.0, row.rhs - range.lower);
    Constraint c{row.name + "_bigm_lo", row.terms, Sense::kGreaterEqual,
                 row.rhs - m};
    c.terms.push_back({indicator.binary, -m});
    out.push_back(std::move(c));
  }
  return out;
}

Model linearize_indicators(const Model& model) {
  Model out;
  for (const Variable& v : model.variables()) {
    out.add_variable(v.name, v.lower, v.upper, v.type);
  }
  auto add_row = [&out](const Constraint& c) {
    LinearExpr e;
    for (const Term& t : c.terms) e.add(t.var, t.coef);
    out.add_constraint(c.name, e, c.sense, c.rhs);
  };
  for (const Constraint& c : model.constraints()) add_row(c);
  for (const IndicatorConstraint& ind : model.indicators()) {
    for (const Constraint& c : linearize_indicator(ind, model.variables())) {
      add_row(c);
    }
  }
  out.set_objective(model.objective());
  return out;
}

}  // namespace pipeplan::milp
