#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace cfrac {

enum class SolveStatus { Optimal, Infeasible, Unbounded, NumericalFailure, IterLimit };

std::string to_string(SolveStatus s);

enum class RowSense { LessEqual, Equal, GreaterEqual };

/// Dense linear program
///
///   maximise (or minimise) c^T x  subject to  A x (<=, =, >=) b,
///
/// with every variable either nonnegative or free.
struct LpProblem {
  Eigen::VectorXd objective;
  Eigen::MatrixXd constraints;
  Eigen::VectorXd rhs;
  std::vector<RowSense> senses;
  std::vector<bool> free_variables;  // empty means all nonnegative
  bool maximize = true;

  Eigen::Index num_variables() const { return objective.size(); }
  Eigen::Index num_rows() const { return constraints.rows(); }
  /// Throws InvalidArgument on inconsistent dimensions or non-finite data.
  void check() const;
};

struct LpSolution {
  SolveStatus status = SolveStatus::NumericalFailure;
  double value = 0.0;       // primal objective
  double dual_value = 0.0;  // b^T y
  double gap = 0.0;         // |value - dual_value|
  Eigen::VectorXd primal;
  /// Row multipliers. For a maximisation: y >= 0 on <= rows, y <= 0 on >=
  /// rows, free on = rows, and A^T y >= c on nonnegative columns.
  Eigen::VectorXd dual;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  int iterations = 0;
};

inline constexpr double kDefaultLpTol = 1e-9;

/// Two-phase primal simplex on a dense tableau with Bland's rule.
/// Deterministic: the same input always takes the same pivots.
LpSolution solve_lp(const LpProblem& p, double tol = kDefaultLpTol, int max_iterations = 100000);

}  // namespace cfrac
