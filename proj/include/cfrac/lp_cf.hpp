#pragma once

// Exact noncontextual fraction of discrete models by linear programming, and
// the Bell inequalities read off the optimal dual.

#include <vector>

#include "cfrac/empirical.hpp"
#include "cfrac/solvers/lp.hpp"

namespace cfrac {

/// A real function on the joint outcomes of a context, dense over
/// enumerate_assignments(s, context).
struct ContextFunction {
  Context context;
  std::vector<Assignment> outcomes;
  std::vector<double> values;

  double at(const Assignment& o) const;
  double sup() const;
  bool operator==(const ContextFunction&) const = default;
};

struct NCFResult {
  double ncf = 0.0;
  double cf = 1.0;
  /// Subnormalised global table of mass ncf whose marginals stay below e.
  DiscreteTable witness;
  /// Optimal f_C >= 0 of the dual program, one per maximal context.
  std::vector<ContextFunction> dual_witness;
  double dual_value = 0.0;
  double duality_gap = 0.0;
  int iterations = 0;
};

/// maximise sum_g mu(g) s.t. sum_{g|C = o} mu(g) <= e_C(o), mu >= 0.
///
/// Columns follow enumerate_global_assignments; rows go through the maximal
/// contexts in scenario order and, inside a context, through
/// enumerate_assignments. Throws InvalidArgument for non-discrete models.
LpProblem build_ncf_lp(const EmpiricalModel& e);

/// Throws SolverError when the LP does not reach optimality.
NCFResult ncf(const EmpiricalModel& e, double tol = kDefaultLpTol);

/// (beta, R): sum_C beta_C(g|C) <= R for every global assignment g.
struct BellInequality {
  std::vector<ContextFunction> beta;  // one per maximal context
  double bound = 0.0;

  /// sum_C sup_o beta_C(o)
  double norm() const;
};

/// beta_C = 1/|M| - f_C from the optimal dual, with R = 0. Then
/// <beta, e> = 1 - NCF(e) = CF(e).
BellInequality extract_bell(const EmpiricalModel& e, double tol = kDefaultLpTol);
BellInequality bell_from_dual(const MeasurementScenario& s, const std::vector<ContextFunction>& f);

/// sum_C sum_o beta_C(o) e_C(o)
double pairing(const BellInequality& b, const EmpiricalModel& e);

/// max_g sum_C beta_C(g|C) - R; nonpositive iff (beta, R) is a valid
/// inequality for every noncontextual model.
double max_global_excess(const BellInequality& b, const MeasurementScenario& s);

/// max(0, <beta, e> - R) / (||beta|| - R). A zero numerator gives 0 even for
/// a degenerate denominator; otherwise ||beta|| <= R throws InvalidArgument.
double normalized_violation(const BellInequality& b, const EmpiricalModel& e);

}  // namespace cfrac
