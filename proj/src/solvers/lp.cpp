#include "cfrac/solvers/lp.hpp"

#include <cmath>
#include <limits>

#include "cfrac/error.hpp"

namespace cfrac {

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::NumericalFailure: return "numerical_failure";
    case SolveStatus::IterLimit: return "iteration_limit";
  }
  return "unknown";
}

void LpProblem::check() const {
  const auto n = objective.size();
  if (constraints.cols() != n && constraints.rows() > 0) throw InvalidArgument("LP: constraint matrix has wrong width");
  if (rhs.size() != constraints.rows()) throw InvalidArgument("LP: right-hand side has wrong length");
  if (static_cast<Eigen::Index>(senses.size()) != constraints.rows()) throw InvalidArgument("LP: one sense per row");
  if (!free_variables.empty() && static_cast<Eigen::Index>(free_variables.size()) != n) {
    throw InvalidArgument("LP: free-variable flags have wrong length");
  }
  if (!objective.allFinite() || !constraints.allFinite() || !rhs.allFinite()) {
    throw InvalidArgument("LP: non-finite data");
  }
}

namespace {

constexpr double kPivotTol = 1e-11;

// Tableau for  max c^T z  s.t.  A z = b (b >= 0), z >= 0, with a starting
// basis of unit columns.
class Tableau {
 public:
  Tableau(Eigen::MatrixXd a, Eigen::VectorXd b, std::vector<Eigen::Index> basis)
      : t_(a.rows(), a.cols() + 1), basis_(std::move(basis)) {
    t_.leftCols(a.cols()) = a;
    t_.col(a.cols()) = b;
  }

  Eigen::Index rows() const { return t_.rows(); }
  Eigen::Index cols() const { return t_.cols() - 1; }
  const std::vector<Eigen::Index>& basis() const { return basis_; }
  double rhs(Eigen::Index i) const { return t_(i, cols()); }
  double at(Eigen::Index i, Eigen::Index j) const { return t_(i, j); }

  void pivot(Eigen::Index row, Eigen::Index col) {
    t_.row(row) /= t_(row, col);
    for (Eigen::Index i = 0; i < t_.rows(); ++i) {
      if (i == row) continue;
      const double f = t_(i, col);
      if (f != 0.0) t_.row(i) -= f * t_.row(row);
    }
    basis_[static_cast<std::size_t>(row)] = col;
  }

  // Bland's rule. `allowed` masks columns that may enter.
  SolveStatus optimize(const Eigen::VectorXd& cost, const std::vector<bool>& allowed, double tol, int& iterations,
                       int max_iterations) {
    while (true) {
      if (iterations >= max_iterations) return SolveStatus::IterLimit;
      Eigen::VectorXd cb(rows());
      for (Eigen::Index i = 0; i < rows(); ++i) cb(i) = cost(basis_[static_cast<std::size_t>(i)]);
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < cols(); ++j) {
        if (!allowed[static_cast<std::size_t>(j)]) continue;
        const double reduced = cost(j) - cb.dot(t_.col(j));
        if (reduced > tol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return SolveStatus::Optimal;

      Eigen::Index leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < rows(); ++i) {
        const double a = t_(i, enter);
        if (a <= kPivotTol) continue;
        const double ratio = std::max(0.0, rhs(i)) / a;
        const bool tie = leave >= 0 && std::abs(ratio - best) <= 1e-12 * (1.0 + best);
        if ((!tie && ratio < best) ||
            (tie && basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)])) {
          if (!tie) best = ratio;
          leave = i;
        }
      }
      if (leave < 0) return SolveStatus::Unbounded;
      pivot(leave, enter);
      ++iterations;
    }
  }

 private:
  Eigen::MatrixXd t_;
  std::vector<Eigen::Index> basis_;
};

}  // namespace

LpSolution solve_lp(const LpProblem& p, double tol, int max_iterations) {
  p.check();
  const Eigen::Index n = p.num_variables();
  const Eigen::Index m = p.num_rows();
  auto is_free = [&](Eigen::Index j) { return !p.free_variables.empty() && p.free_variables[static_cast<std::size_t>(j)]; };

  // Structural columns: one per variable, plus a negative copy for free ones.
  std::vector<Eigen::Index> neg_col(static_cast<std::size_t>(n), -1);
  Eigen::Index ns = n;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (is_free(j)) neg_col[static_cast<std::size_t>(j)] = ns++;
  }

  // Orient rows so that b >= 0.
  Eigen::VectorXd sign = Eigen::VectorXd::Ones(m);
  std::vector<RowSense> sense = p.senses;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (p.rhs(i) < 0.0) {
      sign(i) = -1.0;
      auto& s = sense[static_cast<std::size_t>(i)];
      if (s == RowSense::LessEqual) s = RowSense::GreaterEqual;
      else if (s == RowSense::GreaterEqual) s = RowSense::LessEqual;
    }
  }

  Eigen::Index n_slack = 0, n_art = 0;
  for (auto s : sense) {
    if (s != RowSense::Equal) ++n_slack;
    if (s != RowSense::LessEqual) ++n_art;
  }
  const Eigen::Index total = ns + n_slack + n_art;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, total);
  Eigen::VectorXd b(m);
  std::vector<Eigen::Index> basis(static_cast<std::size_t>(m));
  std::vector<bool> artificial(static_cast<std::size_t>(total), false);
  Eigen::Index slack = ns, art = ns + n_slack;
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      a(i, j) = sign(i) * p.constraints(i, j);
      if (neg_col[static_cast<std::size_t>(j)] >= 0) a(i, neg_col[static_cast<std::size_t>(j)]) = -a(i, j);
    }
    b(i) = sign(i) * p.rhs(i);
    switch (sense[static_cast<std::size_t>(i)]) {
      case RowSense::LessEqual:
        a(i, slack) = 1.0;
        basis[static_cast<std::size_t>(i)] = slack++;
        break;
      case RowSense::GreaterEqual:
        a(i, slack++) = -1.0;
        [[fallthrough]];
      case RowSense::Equal:
        a(i, art) = 1.0;
        artificial[static_cast<std::size_t>(art)] = true;
        basis[static_cast<std::size_t>(i)] = art++;
        break;
    }
  }

  LpSolution sol;
  Tableau tab(a, b, basis);
  std::vector<bool> allowed(static_cast<std::size_t>(total), true);

  if (n_art > 0) {
    Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(total);
    for (Eigen::Index j = 0; j < total; ++j) {
      if (artificial[static_cast<std::size_t>(j)]) phase1(j) = -1.0;
    }
    SolveStatus st = tab.optimize(phase1, allowed, tol, sol.iterations, max_iterations);
    if (st == SolveStatus::IterLimit) {
      sol.status = st;
      return sol;
    }
    double infeas = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (artificial[static_cast<std::size_t>(tab.basis()[static_cast<std::size_t>(i)])]) infeas += tab.rhs(i);
    }
    if (infeas > tol * (1.0 + b.lpNorm<Eigen::Infinity>())) {
      sol.status = SolveStatus::Infeasible;
      return sol;
    }
    // Pivot remaining artificials out; rows where that fails are redundant.
    for (Eigen::Index i = 0; i < m; ++i) {
      if (!artificial[static_cast<std::size_t>(tab.basis()[static_cast<std::size_t>(i)])]) continue;
      for (Eigen::Index j = 0; j < ns + n_slack; ++j) {
        if (std::abs(tab.at(i, j)) > 1e-9) {
          tab.pivot(i, j);
          ++sol.iterations;
          break;
        }
      }
    }
    for (Eigen::Index j = 0; j < total; ++j) allowed[static_cast<std::size_t>(j)] = !artificial[static_cast<std::size_t>(j)];
  }

  const double dir = p.maximize ? 1.0 : -1.0;
  Eigen::VectorXd cost = Eigen::VectorXd::Zero(total);
  for (Eigen::Index j = 0; j < n; ++j) {
    cost(j) = dir * p.objective(j);
    if (neg_col[static_cast<std::size_t>(j)] >= 0) cost(neg_col[static_cast<std::size_t>(j)]) = -cost(j);
  }
  sol.status = tab.optimize(cost, allowed, tol, sol.iterations, max_iterations);
  if (sol.status != SolveStatus::Optimal) return sol;

  // Recover primal and dual from the final basis with a fresh factorization.
  Eigen::MatrixXd bmat(m, m);
  Eigen::VectorXd cb(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    bmat.col(i) = a.col(tab.basis()[static_cast<std::size_t>(i)]);
    cb(i) = cost(tab.basis()[static_cast<std::size_t>(i)]);
  }
  Eigen::VectorXd z = Eigen::VectorXd::Zero(total);
  Eigen::VectorXd ys = Eigen::VectorXd::Zero(m);
  if (m > 0) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(bmat);
    if (!lu.isInvertible()) {
      sol.status = SolveStatus::NumericalFailure;
      return sol;
    }
    Eigen::VectorXd zb = lu.solve(b);
    for (Eigen::Index i = 0; i < m; ++i) z(tab.basis()[static_cast<std::size_t>(i)]) = std::max(0.0, zb(i));
    ys = lu.transpose().solve(cb);
  }

  sol.primal.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    sol.primal(j) = z(j);
    if (neg_col[static_cast<std::size_t>(j)] >= 0) sol.primal(j) -= z(neg_col[static_cast<std::size_t>(j)]);
  }
  sol.dual = dir * sign.cwiseProduct(ys);
  sol.value = p.objective.dot(sol.primal);
  sol.dual_value = p.rhs.dot(sol.dual);
  sol.gap = std::abs(sol.value - sol.dual_value);

  // Residuals, stated for the maximisation form (minimisation flips signs).
  Eigen::VectorXd ax = p.constraints * sol.primal;
  double pr = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    const double r = ax(i) - p.rhs(i);
    switch (p.senses[static_cast<std::size_t>(i)]) {
      case RowSense::LessEqual: pr = std::max(pr, r); break;
      case RowSense::GreaterEqual: pr = std::max(pr, -r); break;
      case RowSense::Equal: pr = std::max(pr, std::abs(r)); break;
    }
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    if (!is_free(j)) pr = std::max(pr, -sol.primal(j));
  }
  sol.primal_residual = pr;

  Eigen::VectorXd y = dir * sol.dual;
  Eigen::VectorXd reduced = p.constraints.transpose() * y - dir * p.objective;
  double dr = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) dr = std::max(dr, is_free(j) ? std::abs(reduced(j)) : -reduced(j));
  for (Eigen::Index i = 0; i < m; ++i) {
    switch (p.senses[static_cast<std::size_t>(i)]) {
      case RowSense::LessEqual: dr = std::max(dr, -y(i)); break;
      case RowSense::GreaterEqual: dr = std::max(dr, y(i)); break;
      case RowSense::Equal: break;
    }
  }
  sol.dual_residual = dr;
  return sol;
}

}  // namespace cfrac
