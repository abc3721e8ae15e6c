// Dense-tableau bounded dual simplex used by the built-in branch-and-bound.
//
// Every row i is written as a_i x - r_i = 0 with a bounded logical r_i, so
// a row's sense lives entirely in the bounds of r_i and relaxing or
// enforcing a row is a bound change. Columns [0, n) are structural, [n, n+m)
// are logicals. The slack basis is dual feasible whenever each structural
// with a negative cost has a finite upper bound and each one with a positive
// cost a finite lower bound; columns violating that are boxed at +-kBigBox.

#ifndef PIPEPLAN_MILP_SIMPLEX_H_
#define PIPEPLAN_MILP_SIMPLEX_H_

#include <cstdint>
#include <span>
#include <vector>

namespace pipeplan::milp {

struct LpData {
  int rows = 0;
  int cols = 0;
  std::vector<double> matrix;  // rows x cols, row-major
  std::vector<double> cost;    // cols
  // Bounds of all rows + cols variables: structurals then logicals.
  std::vector<double> lower;
  std::vector<double> upper;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

struct LpBasis {
  std::vector<int> basic;           // variable index per row
  std::vector<std::uint8_t> at_upper;  // per variable, nonbasic position
};

class DualSimplex {
 public:
  static constexpr double kBigBox = 1e9;

  explicit DualSimplex(LpData data);

  // Solves from the slack basis.
  LpStatus solve();

  // Re-optimises after bound changes, keeping the current basis.
  LpStatus reoptimize();

  // Rebuilds the tableau for `basis` under the given bounds, then
  // re-optimises. Falls back to a cold solve if the basis is singular or not
  // dual feasible.
  LpStatus solve_from(const LpBasis& basis, std::span<const double> lower,
                      std::span<const double> upper);

  void set_bounds(int var, double lower, double upper);

  LpBasis basis() const;

  double objective() const;
  std::span<const double> values() const { return {value_.data(), static_cast<std::size_t>(cols_)}; }
  double value(int var) const { return value_[var]; }
  double lower(int var) const { return lower_[var]; }
  double upper(int var) const { return upper_[var]; }
  std::span<const double> all_lower() const { return lower_; }
  std::span<const double> all_upper() const { return upper_; }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  long iterations() const { return iterations_; }

 private:
  double& tab(int r, int c) { return tableau_[static_cast<std::size_t>(r) * width_ + c]; }
  double tab(int r, int c) const {
    return tableau_[static_cast<std::size_t>(r) * width_ + c];
  }

  void reset_to_slack_basis();
  void place_nonbasic(int var, bool prefer_upper);
  void recompute_basic_values();
  void recompute_reduced_costs();
  bool dual_feasible() const;
  void pivot(int row, int col);
  LpStatus run_dual();
  bool verify_residuals() const;
  bool refactor(const LpBasis& basis);

  LpData data_;
  int rows_ = 0;
  int cols_ = 0;
  int width_ = 0;  // cols + rows
  std::vector<double> tableau_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<double> value_;
  std::vector<double> reduced_;
  std::vector<double> cost_;  // extended with zeros for logicals
  std::vector<int> basic_;    // per row
  std::vector<int> row_of_;   // per variable, -1 if nonbasic
  std::vector<std::uint8_t> boxed_;
  long iterations_ = 0;
};

}  // namespace pipeplan::milp

#endif  // PIPEPLAN_MILP_SIMPLEX_H_
