#include "pipeplan/milp/model.h"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "pipeplan/errors.h"

namespace pipeplan::milp {
namespace {

const char* sense_token(Sense s) {
  switch (s) {
    case Sense::kLessEqual:
      return "<=";
    case Sense::kGreaterEqual:
      return ">=";
    case Sense::kEqual:
      return "=";
  }
  return "?";
}

void write_terms(std::ostream& out, const std::vector<Term>& terms,
                 const std::vector<Variable>& vars) {
  if (terms.empty()) {
    out << " 0 " << vars.front().name;
    return;
  }
  for (const Term& t : terms) {
    out << (t.coef < 0 ? " - " : " + ") << std::abs(t.coef) << ' '
        << vars[t.var].name;
  }
}

std::string lp_bound(double v) {
  if (v == kInfinity) return "+inf";
  if (v == -kInfinity) return "-inf";
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

}  // namespace

LinearExpr& LinearExpr::operator+=(const LinearExpr& other) {
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  constant_ += other.constant_;
  return *this;
}

LinearExpr& LinearExpr::operator-=(const LinearExpr& other) {
  for (const Term& t : other.terms_) terms_.push_back({t.var, -t.coef});
  constant_ -= other.constant_;
  return *this;
}

LinearExpr& LinearExpr::operator*=(double factor) {
  for (Term& t : terms_) t.coef *= factor;
  constant_ *= factor;
  return *this;
}

double LinearExpr::evaluate(std::span<const double> values) const {
  double sum = constant_;
  for (const Term& t : terms_) sum += t.coef * values[t.var];
  return sum;
}

LinearExpr LinearExpr::normalized() const {
  std::vector<Term> sorted = terms_;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const Term& a, const Term& b) { return a.var < b.var; });
  LinearExpr out(constant_);
  for (const Term& t : sorted) {
    if (!out.terms_.empty() && out.terms_.back().var == t.var) {
      out.terms_.back().coef += t.coef;
    } else {
      out.terms_.push_back(t);
    }
  }
  std::erase_if(out.terms_, [](const Term& t) { return t.coef == 0.0; });
  return out;
}

LinearExpr operator+(LinearExpr a, const LinearExpr& b) { return a += b; }
LinearExpr operator-(LinearExpr a, const LinearExpr& b) { return a -= b; }
LinearExpr operator*(double f, LinearExpr e) { return e *= f; }

double Constraint::activity(std::span<const double> values) const {
  double sum = 0.0;
  for (const Term& t : terms) sum += t.coef * values[t.var];
  return sum;
}

double Constraint::violation(std::span<const double> values) const {
  const double a = activity(values);
  switch (sense) {
    case Sense::kLessEqual:
      return std::max(0.0, a - rhs);
    case Sense::kGreaterEqual:
      return std::max(0.0, rhs - a);
    case Sense::kEqual:
      return std::abs(a - rhs);
  }
  return 0.0;
}

int Model::add_variable(std::string name, double lower, double upper,
                        VarType type) {
  if (type == VarType::kBinary) {
    lower = std::max(lower, 0.0);
    upper = std::min(upper, 1.0);
  }
  if (std::isnan(lower) || std::isnan(upper) || lower > upper) {
    throw ParameterError("variable " + name + ": invalid bounds");
  }
  variables_.push_back({std::move(name), lower, upper, type});
  return num_variables() - 1;
}

int Model::add_constraint(std::string name, const LinearExpr& lhs, Sense sense,
                          double rhs) {
  const LinearExpr e = lhs.normalized();
  constraints_.push_back({std::move(name), e.terms(), sense, rhs - e.constant()});
  return num_constraints() - 1;
}

int Model::add_indicator(std::string name, int binary, const LinearExpr& lhs,
                         Sense sense, double rhs) {
  if (binary < 0 || binary >= num_variables() ||
      variables_[binary].type != VarType::kBinary) {
    throw ParameterError("indicator " + name + ": condition is not binary");
  }
  const LinearExpr e = lhs.normalized();
  indicators_.push_back(
      {binary, Constraint{std::move(name), e.terms(), sense, rhs - e.constant()}});
  return num_indicators() - 1;
}

void Model::set_objective(const LinearExpr& objective) {
  objective_ = objective.normalized();
}

void Model::set_bounds(int var, double lower, double upper) {
  if (lower > upper) {
    throw ParameterError("set_bounds: lower > upper for " +
                         variables_[var].name);
  }
  variables_[var].lower = lower;
  variables_[var].upper = upper;
}

bool Model::is_feasible(std::span<const double> values, double tolerance,
                        std::string* why) const {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (values.size() != variables_.size()) return fail("wrong vector size");
  for (int i = 0; i < num_variables(); ++i) {
    const Variable& v = variables_[i];
    const double x = values[i];
    if (!std::isfinite(x)) return fail(v.name + " not finite");
    if (x < v.lower - tolerance || x > v.upper + tolerance) {
      return fail(v.name + " out of bounds");
    }
    if (v.type != VarType::kContinuous &&
        std::abs(x - std::round(x)) > tolerance) {
      return fail(v.name + " not integral");
    }
  }
  for (const Constraint& c : constraints_) {
    if (c.violation(values) > tolerance * (1.0 + std::abs(c.rhs))) {
      return fail("row " + c.name + " violated");
    }
  }
  for (const IndicatorConstraint& ind : indicators_) {
    if (values[ind.binary] > 0.5 &&
        ind.row.violation(values) > tolerance * (1.0 + std::abs(ind.row.rhs))) {
      return fail("indicator " + ind.row.name + " violated");
    }
  }
  return true;
}

void Model::write_lp(std::ostream& out) const {
  const auto precision = out.precision(17);
  out << "\\ pipeplan model: " << num_variables() << " variables, "
      << num_constraints() << " rows, " << num_indicators() << " indicators\n";
  out << "Minimize\n obj:";
  if (objective_.terms().empty()) {
    out << " 0";
  } else {
    write_terms(out, objective_.terms(), variables_);
  }
  if (objective_.constant() != 0.0) {
    out << (objective_.constant() < 0 ? " - " : " + ")
        << std::abs(objective_.constant());
  }
  out << "\nSubject To\n";
  for (const Constraint& c : constraints_) {
    out << ' ' << c.name << ':';
    write_terms(out, c.terms, variables_);
    out << ' ' << sense_token(c.sense) << ' ' << c.rhs << '\n';
  }
  for (const IndicatorConstraint& ind : indicators_) {
    out << ' ' << ind.row.name << ": " << variables_[ind.binary].name
        << " = 1 ->";
    write_terms(out, ind.row.terms, variables_);
    out << ' ' << sense_token(ind.row.sense) << ' ' << ind.row.rhs << '\n';
  }
  out << "Bounds\n";
  for (const Variable& v : variables_) {
    if (v.type == VarType::kBinary) continue;
    out << ' ' << lp_bound(v.lower) << " <= " << v.name
        << " <= " << lp_bound(v.upper) << '\n';
  }
  bool header = false;
  for (const Variable& v : variables_) {
    if (v.type != VarType::kBinary) continue;
    if (!header) out << "Binaries\n";
    header = true;
    out << ' ' << v.name << '\n';
  }
  header = false;
  for (const Variable& v : variables_) {
    if (v.type != VarType::kInteger) continue;
    if (!header) out << "Generals\n";
    header = true;
    out << ' ' << v.name << '\n';
  }
  out << "End\n";
  out.precision(precision);
}

}  // namespace pipeplan::milp
