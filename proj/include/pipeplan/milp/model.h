// Backend-neutral mixed-integer linear model: bounded variables, linear rows,
// indicator rows ("binary = 1 implies row"), and a minimisation objective.

#ifndef PIPEPLAN_MILP_MODEL_H_
#define PIPEPLAN_MILP_MODEL_H_

#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace pipeplan::milp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class VarType { kContinuous, kBinary, kInteger };
enum class Sense { kLessEqual, kGreaterEqual, kEqual };

struct Term {
  int var = 0;
  double coef = 0.0;
};

// Sparse affine expression sum(coef * var) + constant.
class LinearExpr {
 public:
  LinearExpr() = default;
  LinearExpr(double constant) : constant_(constant) {}  // NOLINT

  static LinearExpr variable(int var, double coef = 1.0) {
    LinearExpr e;
    e.add(var, coef);
    return e;
  }

  LinearExpr& add(int var, double coef) {
    if (coef != 0.0) terms_.push_back({var, coef});
    return *this;
  }
  LinearExpr& add_constant(double c) {
    constant_ += c;
    return *this;
  }

  LinearExpr& operator+=(const LinearExpr& other);
  LinearExpr& operator-=(const LinearExpr& other);
  LinearExpr& operator*=(double factor);

  const std::vector<Term>& terms() const { return terms_; }
  double constant() const { return constant_; }

  double evaluate(std::span<const double> values) const;

  // Duplicates merged, zeros dropped, ordered by variable index.
  LinearExpr normalized() const;

 private:
  std::vector<Term> terms_;
  double constant_ = 0.0;
};

LinearExpr operator+(LinearExpr a, const LinearExpr& b);
LinearExpr operator-(LinearExpr a, const LinearExpr& b);
LinearExpr operator*(double f, LinearExpr e);

struct Variable {
  std::string name;
  double lower = 0.0;
  double upper = kInfinity;
  VarType type = VarType::kContinuous;
  int priority = 0;  // branching: higher first
};

struct Constraint {
  std::string name;
  std::vector<Term> terms;
  Sense sense = Sense::kLessEqual;
  double rhs = 0.0;

  double activity(std::span<const double> values) const;
  // Amount by which `values` violate the row (0 when satisfied).
  double violation(std::span<const double> values) const;
};

// binary == 1  ==>  row holds.
struct IndicatorConstraint {
  int binary = 0;
  Constraint row;
};

class Model {
 public:
  int add_variable(std::string name, double lower, double upper,
                   VarType type = VarType::kContinuous);
  int add_binary(std::string name) {
    return add_variable(std::move(name), 0.0, 1.0, VarType::kBinary);
  }

  // The expression's constant is moved to the right-hand side.
  int add_constraint(std::string name, const LinearExpr& lhs, Sense sense,
                     double rhs);
  int add_indicator(std::string name, int binary, const LinearExpr& lhs,
                    Sense sense, double rhs);

  void set_objective(const LinearExpr& objective);

  void set_bounds(int var, double lower, double upper);
  void set_priority(int var, int priority) {
    variables_[var].priority = priority;
  }

  int num_variables() const { return static_cast<int>(variables_.size()); }
  int num_constraints() const { return static_cast<int>(constraints_.size()); }
  int num_indicators() const { return static_cast<int>(indicators_.size()); }

  const Variable& variable(int i) const { return variables_[i]; }
  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const std::vector<IndicatorConstraint>& indicators() const {
    return indicators_;
  }
  const LinearExpr& objective() const { return objective_; }

  bool is_integer(int var) const {
    return variables_[var].type != VarType::kContinuous;
  }

  double objective_value(std::span<const double> values) const {
    return objective_.evaluate(values);
  }

  // Checks bounds, rows, integrality and active indicators. On failure,
  // `why` (if given) names the first violated item.
  bool is_feasible(std::span<const double> values, double tolerance,
                   std::string* why = nullptr) const;

  // CPLEX LP text format; indicators use the "b = 1 -> row" syntax.
  void write_lp(std::ostream& out) const;

 private:
  std::vector<Variable> variables_;
  std::vector<Constraint> constraints_;
  std::vector<IndicatorConstraint> indicators_;
  LinearExpr objective_;
};

}  // namespace pipeplan::milp

#endif  // PIPEPLAN_MILP_MODEL_H_
