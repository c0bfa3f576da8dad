#ifndef CRITNET_LP_H
#define CRITNET_LP_H

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace critnet::lp {

using VarIndex = int32_t;
using RowIndex = int32_t;

enum class RowSense { kLessEqual, kEqual, kGreaterEqual };

enum class SolveStatus {
  kOptimal,
  kInfeasible,
  kUnbounded,
  kIterationLimit,
  kNumericalFailure,
};

std::string ToString(SolveStatus status);

// A linear program in the form
//
//   minimize    c'x
//   subject to  A x {<=,=,>=} b
//               x >= 0
//
// Every variable is non-negative; upper bounds are expressed as rows. The
// constraint matrix is stored sparsely by column.
class Problem {
 public:
  VarIndex AddVariable(double cost);
  RowIndex AddRow(RowSense sense, double rhs);

  // Adds `value` to A(row, var). Repeated calls on the same entry accumulate.
  void AddCoefficient(RowIndex row, VarIndex var, double value);

  void SetCost(VarIndex var, double cost) { costs_[var] = cost; }

  size_t num_variables() const { return costs_.size(); }
  size_t num_rows() const { return senses_.size(); }
  size_t num_nonzeros() const;

  double cost(VarIndex var) const { return costs_[var]; }
  RowSense sense(RowIndex row) const { return senses_[row]; }
  double rhs(RowIndex row) const { return rhs_[row]; }

  // Column entries (row, value) of one variable. Duplicate rows are merged by
  // Compact(); the solver calls it on a copy.
  const std::vector<std::pair<RowIndex, double>>& column(VarIndex var) const {
    return columns_[var];
  }

  // Merges duplicate entries and drops exact zeros.
  void Compact();

 private:
  std::vector<double> costs_;
  std::vector<RowSense> senses_;
  std::vector<double> rhs_;
  std::vector<std::vector<std::pair<RowIndex, double>>> columns_;
};

struct SimplexOptions {
  int64_t max_iterations = 2'000'000;
  // Pivots between sparse LU refactorizations.
  int refactor_interval = 100;
  double feasibility_tolerance = 1e-9;
  double optimality_tolerance = 1e-9;
  double pivot_tolerance = 1e-9;
  // Consecutive degenerate pivots before switching from Dantzig pricing to
  // Bland's rule. Dantzig pricing resumes after the next non-degenerate pivot.
  int degenerate_pivots_before_bland = 30;
};

struct Solution {
  SolveStatus status = SolveStatus::kInfeasible;
  double objective = 0.0;
  std::vector<double> values;
  int64_t iterations = 0;

  bool optimal() const { return status == SolveStatus::kOptimal; }
};

// Two-phase revised simplex. The basis is held as a sparse LU factorization
// followed by a product of eta transformations, one per pivot since the last
// refactorization.
Solution Solve(const Problem& problem, const SimplexOptions& options = {});

}  // namespace critnet::lp

#endif  // CRITNET_LP_H
