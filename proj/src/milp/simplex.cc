#include "pipeplan/milp/simplex.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pipeplan/errors.h"

namespace pipeplan::milp {
namespace {

constexpr double kPrimalTol = 1e-9;
constexpr double kDualTol = 1e-9;
constexpr double kPivotTol = 1e-9;
constexpr double kResidualTol = 1e-7;
constexpr double kInf = std::numeric_limits<double>::infinity();

double feas_tol(double bound) { return kPrimalTol * (1.0 + std::abs(bound)); }

}  // namespace

DualSimplex::DualSimplex(LpData data) : data_(std::move(data)) {
  rows_ = data_.rows;
  cols_ = data_.cols;
  width_ = rows_ + cols_;
  if (static_cast<int>(data_.matrix.size()) != rows_ * cols_ ||
      static_cast<int>(data_.cost.size()) != cols_ ||
      static_cast<int>(data_.lower.size()) != width_ ||
      static_cast<int>(data_.upper.size()) != width_) {
    throw ParameterError("DualSimplex: inconsistent LP dimensions");
  }
  cost_.assign(width_, 0.0);
  std::copy(data_.cost.begin(), data_.cost.end(), cost_.begin());
  lower_ = data_.lower;
  upper_ = data_.upper;
  boxed_.assign(width_, 0);
  for (int j = 0; j < width_; ++j) set_bounds(j, lower_[j], upper_[j]);
  value_.assign(width_, 0.0);
  reduced_.assign(width_, 0.0);
  basic_.assign(rows_, -1);
  row_of_.assign(width_, -1);
}

void DualSimplex::set_bounds(int var, double lower, double upper) {
  // Box the side a nonbasic column must rest on for dual feasibility.
  boxed_[var] = 0;
  const double c = cost_[var];
  if (c > 0.0 && lower == -kInf) {
    lower = -kBigBox;
    boxed_[var] = 1;
  }
  if (c < 0.0 && upper == kInf) {
    upper = kBigBox;
    boxed_[var] = 1;
  }
  const double old_value = value_.empty() ? 0.0 : value_[var];
  const bool was_upper =
      !value_.empty() && old_value == upper_[var] && upper_[var] != lower_[var];
  lower_[var] = lower;
  upper_[var] = upper;
  if (value_.empty() || basic_.empty() || basic_[0] == -1) return;
  if (row_of_[var] >= 0) return;

  bool to_upper = was_upper;
  if (reduced_[var] > kDualTol) to_upper = false;
  if (reduced_[var] < -kDualTol) to_upper = true;
  place_nonbasic(var, to_upper);
  const double delta = value_[var] - old_value;
  if (delta != 0.0) {
    for (int i = 0; i < rows_; ++i) {
      const double a = tab(i, var);
      if (a != 0.0) value_[basic_[i]] -= a * delta;
    }
  }
}

void DualSimplex::place_nonbasic(int var, bool prefer_upper) {
  const double lo = lower_[var];
  const double up = upper_[var];
  if (prefer_upper && up != kInf) {
    value_[var] = up;
  } else if (lo != -kInf) {
    value_[var] = lo;
  } else if (up != kInf) {
    value_[var] = up;
  } else {
    value_[var] = 0.0;
  }
}

void DualSimplex::reset_to_slack_basis() {
  tableau_.assign(static_cast<std::size_t>(rows_) * width_, 0.0);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) {
      tab(i, j) = -data_.matrix[static_cast<std::size_t>(i) * cols_ + j];
    }
    tab(i, cols_ + i) = 1.0;
  }
  std::fill(row_of_.begin(), row_of_.end(), -1);
  for (int i = 0; i < rows_; ++i) {
    basic_[i] = cols_ + i;
    row_of_[cols_ + i] = i;
  }
}

void DualSimplex::recompute_basic_values() {
  for (int i = 0; i < rows_; ++i) {
    double v = 0.0;
    const double* row = &tableau_[static_cast<std::size_t>(i) * width_];
    for (int j = 0; j < width_; ++j) {
      if (row_of_[j] < 0 && row[j] != 0.0) v -= row[j] * value_[j];
    }
    value_[basic_[i]] = v;
  }
}

void DualSimplex::recompute_reduced_costs() {
  reduced_ = cost_;
  for (int i = 0; i < rows_; ++i) {
    const double cb = cost_[basic_[i]];
    if (cb == 0.0) continue;
    const double* row = &tableau_[static_cast<std::size_t>(i) * width_];
    for (int j = 0; j < width_; ++j) reduced_[j] -= cb * row[j];
  }
  for (int i = 0; i < rows_; ++i) reduced_[basic_[i]] = 0.0;
}

bool DualSimplex::dual_feasible() const {
  for (int j = 0; j < width_; ++j) {
    if (row_of_[j] >= 0 || lower_[j] == upper_[j]) continue;
    const double d = reduced_[j];
    const bool at_lower = value_[j] == lower_[j];
    const bool at_upper = value_[j] == upper_[j];
    if (at_lower && d < -1e-7) return false;
    if (at_upper && d > 1e-7) return false;
    if (!at_lower && !at_upper && std::abs(d) > 1e-7) return false;
  }
  return true;
}

void DualSimplex::pivot(int row, int col) {
  double* prow = &tableau_[static_cast<std::size_t>(row) * width_];
  const double inv = 1.0 / prow[col];
  std::vector<int> nz;
  nz.reserve(width_);
  for (int j = 0; j < width_; ++j) {
    if (prow[j] != 0.0) {
      prow[j] *= inv;
      if (std::abs(prow[j]) < 1e-14) {
        prow[j] = 0.0;
      } else {
        nz.push_back(j);
      }
    }
  }
  prow[col] = 1.0;
  for (int i = 0; i < rows_; ++i) {
    if (i == row) continue;
    double* r = &tableau_[static_cast<std::size_t>(i) * width_];
    const double f = r[col];
    if (f == 0.0) continue;
    for (int j : nz) r[j] -= f * prow[j];
    r[col] = 0.0;
  }
  const double fd = reduced_[col];
  if (fd != 0.0) {
    for (int j : nz) reduced_[j] -= fd * prow[j];
  }
  reduced_[col] = 0.0;

  const int leaving = basic_[row];
  row_of_[leaving] = -1;
  basic_[row] = col;
  row_of_[col] = row;
}

bool DualSimplex::verify_residuals() const {
  for (int i = 0; i < rows_; ++i) {
    double activity = 0.0;
    double scale = 1.0;
    for (int j = 0; j < cols_; ++j) {
      const double a = data_.matrix[static_cast<std::size_t>(i) * cols_ + j];
      if (a != 0.0) {
        activity += a * value_[j];
        scale = std::max(scale, std::abs(a * value_[j]));
      }
    }
    if (std::abs(activity - value_[cols_ + i]) > kResidualTol * scale) {
      return false;
    }
  }
  return true;
}

LpStatus DualSimplex::run_dual() {
  const long limit = 200L * (rows_ + cols_) + 1000;
  long local = 0;
  int refactors = 0;
  while (true) {
    if (++local > limit) return LpStatus::kIterationLimit;

    int leave_row = -1;
    double worst = 0.0;
    for (int i = 0; i < rows_; ++i) {
      const int v = basic_[i];
      const double x = value_[v];
      double infeas = 0.0;
      if (x < lower_[v] - feas_tol(lower_[v])) {
        infeas = lower_[v] - x;
      } else if (x > upper_[v] + feas_tol(upper_[v])) {
        infeas = x - upper_[v];
      }
      if (infeas > worst) {
        worst = infeas;
        leave_row = i;
      }
    }

    if (leave_row < 0) {
      if (!verify_residuals() && refactors < 3) {
        ++refactors;
        if (!refactor(basis())) {
          reset_to_slack_basis();
          for (int j = 0; j < width_; ++j) {
            if (row_of_[j] < 0) place_nonbasic(j, cost_[j] < 0.0);
          }
          recompute_basic_values();
          recompute_reduced_costs();
        }
        continue;
      }
      for (int j = 0; j < width_; ++j) {
        if (boxed_[j] && std::abs(value_[j]) >= kBigBox * (1 - 1e-9)) {
          return LpStatus::kUnbounded;
        }
      }
      return LpStatus::kOptimal;
    }

    const int leaving = basic_[leave_row];
    const bool increase = value_[leaving] < lower_[leaving];
    const double target = increase ? lower_[leaving] : upper_[leaving];
    const double* prow = &tableau_[static_cast<std::size_t>(leave_row) * width_];

    // Harris two-pass ratio test over columns that move x_leaving toward
    // its violated bound: dx_leaving = -alpha_j * dx_j.
    auto eligible = [&](int j, double alpha) {
      if (row_of_[j] >= 0 || lower_[j] == upper_[j]) return false;
      if (std::abs(alpha) < kPivotTol) return false;
      const bool want_up = increase ? alpha < 0.0 : alpha > 0.0;
      return want_up ? value_[j] < upper_[j] : value_[j] > lower_[j];
    };
    double theta_max = kInf;
    for (int j = 0; j < width_; ++j) {
      const double alpha = prow[j];
      if (!eligible(j, alpha)) continue;
      theta_max =
          std::min(theta_max, (std::abs(reduced_[j]) + kDualTol) / std::abs(alpha));
    }
    if (theta_max == kInf) return LpStatus::kInfeasible;
    int enter = -1;
    double best_alpha = 0.0;
    for (int j = 0; j < width_; ++j) {
      const double alpha = prow[j];
      if (!eligible(j, alpha)) continue;
      if (std::abs(reduced_[j]) / std::abs(alpha) <= theta_max &&
          std::abs(alpha) > best_alpha) {
        best_alpha = std::abs(alpha);
        enter = j;
      }
    }

    const double alpha_q = prow[enter];
    const double delta = (target - value_[leaving]) / (-alpha_q);
    for (int i = 0; i < rows_; ++i) {
      const double a = tab(i, enter);
      if (a != 0.0) value_[basic_[i]] -= a * delta;
    }
    value_[enter] += delta;
    value_[leaving] = target;
    pivot(leave_row, enter);
    ++iterations_;
  }
}

LpStatus DualSimplex::solve() {
  reset_to_slack_basis();
  for (int j = 0; j < width_; ++j) {
    if (row_of_[j] < 0) place_nonbasic(j, cost_[j] < 0.0);
  }
  recompute_basic_values();
  recompute_reduced_costs();
  return run_dual();
}

LpStatus DualSimplex::reoptimize() {
  if (basic_.empty() || (rows_ > 0 && basic_[0] == -1)) return solve();
  if (!dual_feasible()) return solve();
  return run_dual();
}

bool DualSimplex::refactor(const LpBasis& basis) {
  if (static_cast<int>(basis.basic.size()) != rows_) return false;
  reset_to_slack_basis();
  std::vector<std::uint8_t> wanted(width_, 0);
  for (int v : basis.basic) {
    if (v < 0 || v >= width_ || wanted[v]) return false;
    wanted[v] = 1;
  }
  for (int v : basis.basic) {
    if (row_of_[v] >= 0) continue;
    int best_row = -1;
    double best = kPivotTol;
    for (int i = 0; i < rows_; ++i) {
      if (wanted[basic_[i]]) continue;
      const double a = std::abs(tab(i, v));
      if (a > best) {
        best = a;
        best_row = i;
      }
    }
    if (best_row < 0) return false;
    pivot(best_row, v);
  }
  for (int j = 0; j < width_; ++j) {
    if (row_of_[j] >= 0) continue;
    const bool up = j < static_cast<int>(basis.at_upper.size()) && basis.at_upper[j];
    place_nonbasic(j, up);
  }
  recompute_basic_values();
  recompute_reduced_costs();
  return true;
}

LpStatus DualSimplex::solve_from(const LpBasis& basis,
                                 std::span<const double> lower,
                                 std::span<const double> upper) {
  for (int j = 0; j < width_; ++j) {
    lower_[j] = lower[j];
    upper_[j] = upper[j];
  }
  // Re-apply boxing without moving values (refactor places them).
  for (int j = 0; j < width_; ++j) {
    boxed_[j] = 0;
    if (cost_[j] > 0.0 && lower_[j] == -kInf) {
      lower_[j] = -kBigBox;
      boxed_[j] = 1;
    }
    if (cost_[j] < 0.0 && upper_[j] == kInf) {
      upper_[j] = kBigBox;
      boxed_[j] = 1;
    }
  }
  if (refactor(basis) && dual_feasible()) return run_dual();
  return solve();
}

LpBasis DualSimplex::basis() const {
  LpBasis b;
  b.basic = basic_;
  b.at_upper.assign(width_, 0);
  for (int j = 0; j < width_; ++j) {
    if (row_of_[j] < 0 && value_[j] == upper_[j] && upper_[j] != lower_[j]) {
      b.at_upper[j] = 1;
    }
  }
  return b;
}

double DualSimplex::objective() const {
  double obj = 0.0;
  for (int j = 0; j < cols_; ++j) obj += cost_[j] * value_[j];
  return obj;
}

}  // namespace pipeplan::milp
