#include "critnet/lp.h"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <limits>

namespace critnet::lp {

std::string ToString(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal:
      return "optimal";
    case SolveStatus::kInfeasible:
      return "infeasible";
    case SolveStatus::kUnbounded:
      return "unbounded";
    case SolveStatus::kIterationLimit:
      return "iteration limit";
    case SolveStatus::kNumericalFailure:
      return "numerical failure";
  }
  return "unknown";
}

VarIndex Problem::AddVariable(double cost) {
  costs_.push_back(cost);
  columns_.emplace_back();
  return static_cast<VarIndex>(costs_.size() - 1);
}

RowIndex Problem::AddRow(RowSense sense, double rhs) {
  senses_.push_back(sense);
  rhs_.push_back(rhs);
  return static_cast<RowIndex>(senses_.size() - 1);
}

void Problem::AddCoefficient(RowIndex row, VarIndex var, double value) {
  columns_[var].emplace_back(row, value);
}

size_t Problem::num_nonzeros() const {
  size_t total = 0;
  for (const auto& column : columns_) total += column.size();
  return total;
}

void Problem::Compact() {
  for (auto& column : columns_) {
    std::sort(column.begin(), column.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    size_t out = 0;
    for (size_t i = 0; i < column.size();) {
      RowIndex row = column[i].first;
      double sum = 0.0;
      while (i < column.size() && column[i].first == row) sum += column[i++].second;
      if (sum != 0.0) column[out++] = {row, sum};
    }
    column.resize(out);
  }
}

namespace {

struct SingularBasis {};

using SparseColumn = std::vector<std::pair<RowIndex, double>>;

enum class ColumnKind : uint8_t { kStructural, kSlack, kArtificial };

// Elementary transformation recorded after a pivot: B_new^-1 = E B_old^-1.
struct Eta {
  int row;
  double pivot;
  std::vector<std::pair<int, double>> off_pivot;  // (i, alpha_i), i != row
};

class RevisedSimplex {
 public:
  RevisedSimplex(const Problem& problem, const SimplexOptions& options)
      : options_(options) {
    Problem p = problem;
    p.Compact();
    m_ = static_cast<int>(p.num_rows());
    num_structural_ = static_cast<int>(p.num_variables());

    std::vector<double> row_sign(m_, 1.0);
    b_ = Eigen::VectorXd(m_);
    for (int i = 0; i < m_; ++i) {
      if (p.rhs(i) < 0) row_sign[i] = -1.0;
      b_(i) = row_sign[i] * p.rhs(i);
    }

    for (int j = 0; j < num_structural_; ++j) {
      SparseColumn column = p.column(j);
      for (auto& [row, value] : column) value *= row_sign[row];
      AddColumn(std::move(column), ColumnKind::kStructural, p.cost(j));
    }

    basis_.assign(m_, -1);
    for (int i = 0; i < m_; ++i) {
      if (p.sense(i) == RowSense::kEqual) continue;
      double coefficient = (p.sense(i) == RowSense::kLessEqual ? 1.0 : -1.0) * row_sign[i];
      int col = AddColumn({{i, coefficient}}, ColumnKind::kSlack, 0.0);
      if (coefficient > 0) basis_[i] = col;
    }
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] >= 0) continue;
      basis_[i] = AddColumn({{i, 1.0}}, ColumnKind::kArtificial, 0.0);
      ++num_artificial_;
    }
    position_.assign(columns_.size(), -1);
    for (int i = 0; i < m_; ++i) position_[basis_[i]] = i;
  }

  Solution Run() {
    Solution solution;
    if (m_ == 0) {
      solution.status = SolveStatus::kOptimal;
      for (int j = 0; j < num_structural_; ++j) {
        if (costs_[j] < 0) solution.status = SolveStatus::kUnbounded;
      }
      solution.values.assign(num_structural_, 0.0);
      return solution;
    }
    Refactor();
    if (num_artificial_ > 0) {
      std::vector<double> phase_one(columns_.size(), 0.0);
      for (size_t j = 0; j < columns_.size(); ++j) {
        if (kinds_[j] == ColumnKind::kArtificial) phase_one[j] = 1.0;
      }
      SolveStatus status = Iterate(phase_one, /*phase_two=*/false);
      solution.iterations = iterations_;
      if (status == SolveStatus::kIterationLimit) {
        solution.status = status;
        return solution;
      }
      double infeasibility = 0.0;
      for (int i = 0; i < m_; ++i) {
        if (kinds_[basis_[i]] == ColumnKind::kArtificial) {
          infeasibility += std::max(0.0, x_basic_(i));
        }
      }
      double scale = 1.0 + b_.cwiseAbs().maxCoeff();
      if (infeasibility > 100 * options_.feasibility_tolerance * scale) {
        solution.status = SolveStatus::kInfeasible;
        return solution;
      }
      DriveOutArtificials();
    }

    SolveStatus status = Iterate(costs_, /*phase_two=*/true);
    solution.status = status;
    solution.iterations = iterations_;
    if (status != SolveStatus::kOptimal) return solution;

    solution.values.assign(num_structural_, 0.0);
    for (int i = 0; i < m_; ++i) {
      int col = basis_[i];
      if (col < num_structural_) solution.values[col] = std::max(0.0, x_basic_(i));
    }
    double objective = 0.0;
    for (int j = 0; j < num_structural_; ++j) objective += costs_[j] * solution.values[j];
    solution.objective = objective;
    return solution;
  }

 private:
  int AddColumn(SparseColumn column, ColumnKind kind, double cost) {
    columns_.push_back(std::move(column));
    kinds_.push_back(kind);
    costs_.push_back(cost);
    return static_cast<int>(columns_.size() - 1);
  }

  // Solves B x = rhs in place.
  void Ftran(Eigen::VectorXd& x) const {
    x = lu_.solve(x);
    for (const Eta& eta : etas_) {
      double pivot_value = x(eta.row) / eta.pivot;
      x(eta.row) = pivot_value;
      if (pivot_value == 0.0) continue;
      for (const auto& [i, a] : eta.off_pivot) x(i) -= a * pivot_value;
    }
  }

  // Solves y' B = c' in place.
  void Btran(Eigen::VectorXd& y) const {
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
      double value = y(it->row);
      for (const auto& [i, a] : it->off_pivot) value -= y(i) * a;
      y(it->row) = value / it->pivot;
    }
    y = lu_.transpose().solve(y);
  }

  // alpha = B^-1 a_j
  void ComputeColumn(int j, Eigen::VectorXd& alpha) const {
    alpha.setZero(m_);
    for (const auto& [row, value] : columns_[j]) alpha(row) = value;
    Ftran(alpha);
  }

  double Dot(const Eigen::VectorXd& y, int j) const {
    double sum = 0.0;
    for (const auto& [row, value] : columns_[j]) sum += y(row) * value;
    return sum;
  }

  void ComputeDuals(const std::vector<double>& costs) {
    duals_.resize(m_);
    for (int i = 0; i < m_; ++i) duals_(i) = costs[basis_[i]];
    Btran(duals_);
  }

  void Refactor() {
    std::vector<Eigen::Triplet<double>> triplets;
    for (int i = 0; i < m_; ++i) {
      for (const auto& [row, value] : columns_[basis_[i]]) triplets.emplace_back(row, i, value);
    }
    Eigen::SparseMatrix<double> basis_matrix(m_, m_);
    basis_matrix.setFromTriplets(triplets.begin(), triplets.end());
    basis_matrix.makeCompressed();
    lu_.analyzePattern(basis_matrix);
    lu_.factorize(basis_matrix);
    if (lu_.info() != Eigen::Success) throw SingularBasis();
    etas_.clear();
    x_basic_ = b_;
    Ftran(x_basic_);
  }

  void Pivot(int leaving_row, int entering, const Eigen::VectorXd& alpha) {
    double pivot = alpha(leaving_row);
    double step = x_basic_(leaving_row) / pivot;
    if (step < 0) step = 0;
    x_basic_.noalias() -= step * alpha;
    x_basic_(leaving_row) = step;

    Eta eta;
    eta.row = leaving_row;
    eta.pivot = pivot;
    for (int i = 0; i < m_; ++i) {
      if (i != leaving_row && std::abs(alpha(i)) > 1e-14) eta.off_pivot.emplace_back(i, alpha(i));
    }
    etas_.push_back(std::move(eta));

    position_[basis_[leaving_row]] = -1;
    basis_[leaving_row] = entering;
    position_[entering] = leaving_row;
  }

  bool Entering(int j, bool phase_two) const {
    if (position_[j] >= 0) return false;
    return !(phase_two && kinds_[j] == ColumnKind::kArtificial);
  }

  SolveStatus Iterate(const std::vector<double>& costs, bool phase_two) {
    const int n = static_cast<int>(columns_.size());
    Eigen::VectorXd alpha(m_);
    int degenerate_streak = 0;

    while (true) {
      if (iterations_ >= options_.max_iterations) return SolveStatus::kIterationLimit;
      if (static_cast<int>(etas_.size()) >= options_.refactor_interval) Refactor();
      ComputeDuals(costs);

      const bool bland = degenerate_streak >= options_.degenerate_pivots_before_bland;
      int entering = -1;
      double best = -options_.optimality_tolerance;
      for (int j = 0; j < n; ++j) {
        if (!Entering(j, phase_two)) continue;
        double reduced = costs[j] - Dot(duals_, j);
        if (reduced < best) {
          entering = j;
          if (bland) break;
          best = reduced;
        }
      }
      if (entering < 0) {
        // Confirm optimality against a fresh factorization before stopping.
        if (!etas_.empty()) {
          Refactor();
          ComputeDuals(costs);
          bool improvable = false;
          for (int j = 0; j < n && !improvable; ++j) {
            if (Entering(j, phase_two) &&
                costs[j] - Dot(duals_, j) < -options_.optimality_tolerance) {
              improvable = true;
            }
          }
          if (improvable) continue;
        }
        return SolveStatus::kOptimal;
      }

      ComputeColumn(entering, alpha);
      int leaving = SelectLeaving(alpha, phase_two, bland);
      if (leaving < 0) {
        if (!etas_.empty()) {
          Refactor();
          continue;
        }
        return SolveStatus::kUnbounded;
      }

      double step = std::max(0.0, x_basic_(leaving)) / alpha(leaving);
      degenerate_streak = step <= 1e-12 ? degenerate_streak + 1 : 0;
      Pivot(leaving, entering, alpha);
      ++iterations_;
    }
  }

  // Ratio test. Bland mode takes the minimum ratio with the smallest basic
  // column index on ties; otherwise a two-pass Harris test prefers large
  // pivots among near-minimal ratios.
  int SelectLeaving(const Eigen::VectorXd& alpha, bool phase_two, bool bland) const {
    const double tol = options_.pivot_tolerance;
    const double primal_tol = options_.feasibility_tolerance;

    // Artificials left in the basis at level zero must stay at zero.
    if (phase_two) {
      int forced = -1;
      double largest = tol;
      for (int i = 0; i < m_; ++i) {
        if (kinds_[basis_[i]] == ColumnKind::kArtificial && std::abs(alpha(i)) > largest) {
          largest = std::abs(alpha(i));
          forced = i;
        }
      }
      if (forced >= 0) return forced;
    }

    if (bland) {
      int leaving = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m_; ++i) {
        if (alpha(i) <= tol) continue;
        double ratio = std::max(0.0, x_basic_(i)) / alpha(i);
        if (ratio < best - 1e-12 ||
            (ratio <= best + 1e-12 && leaving >= 0 && basis_[i] < basis_[leaving])) {
          if (ratio < best) best = ratio;
          leaving = i;
        }
      }
      return leaving;
    }

    double bound = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m_; ++i) {
      if (alpha(i) <= tol) continue;
      bound = std::min(bound, (std::max(0.0, x_basic_(i)) + primal_tol) / alpha(i));
    }
    if (!std::isfinite(bound)) return -1;
    int leaving = -1;
    double largest = 0.0;
    for (int i = 0; i < m_; ++i) {
      if (alpha(i) <= tol) continue;
      if (std::max(0.0, x_basic_(i)) / alpha(i) <= bound && alpha(i) > largest) {
        largest = alpha(i);
        leaving = i;
      }
    }
    return leaving;
  }

  void DriveOutArtificials() {
    Refactor();
    Eigen::VectorXd row(m_);
    Eigen::VectorXd alpha(m_);
    for (int i = 0; i < m_; ++i) {
      if (kinds_[basis_[i]] != ColumnKind::kArtificial) continue;
      row.setZero();
      row(i) = 1.0;
      Btran(row);
      int best_column = -1;
      double best = 1e-7;
      for (int j = 0; j < static_cast<int>(columns_.size()); ++j) {
        if (position_[j] >= 0 || kinds_[j] == ColumnKind::kArtificial) continue;
        double entry = Dot(row, j);
        if (std::abs(entry) > best) {
          best = std::abs(entry);
          best_column = j;
        }
      }
      // No candidate means the row is redundant; the artificial stays basic at zero.
      if (best_column < 0) continue;
      ComputeColumn(best_column, alpha);
      x_basic_(i) = 0.0;
      Pivot(i, best_column, alpha);
      if (static_cast<int>(etas_.size()) >= options_.refactor_interval) Refactor();
    }
    Refactor();
  }

  SimplexOptions options_;
  int m_ = 0;
  int num_structural_ = 0;
  int num_artificial_ = 0;
  std::vector<SparseColumn> columns_;
  std::vector<ColumnKind> kinds_;
  std::vector<double> costs_;
  std::vector<int> basis_;
  std::vector<int> position_;
  Eigen::VectorXd b_;
  Eigen::VectorXd x_basic_;
  Eigen::VectorXd duals_;
  // transpose() is non-const in Eigen.
  mutable Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu_;
  std::vector<Eta> etas_;
  int64_t iterations_ = 0;
};

}  // namespace

Solution Solve(const Problem& problem, const SimplexOptions& options) {
  try {
    RevisedSimplex simplex(problem, options);
    return simplex.Run();
  } catch (const SingularBasis&) {
    Solution failed;
    failed.status = SolveStatus::kNumericalFailure;
    return failed;
  }
}

}  // namespace critnet::lp
