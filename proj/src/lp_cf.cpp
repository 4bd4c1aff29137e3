#include "cfrac/lp_cf.hpp"

#include <algorithm>
#include <limits>

#include "cfrac/error.hpp"

namespace cfrac {

double ContextFunction::at(const Assignment& o) const {
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (outcomes[i] == o) return values[i];
  }
  throw InvalidArgument("outcome is not in the domain of this function");
}

double ContextFunction::sup() const {
  if (values.empty()) return 0.0;
  return *std::max_element(values.begin(), values.end());
}

namespace {

void require_discrete(const EmpiricalModel& e) {
  if (!e.scenario().all_finite() || !e.is_discrete()) {
    throw InvalidArgument("the LP needs finite outcome spaces and tables on every context; use the SDP hierarchy");
  }
}

}  // namespace

LpProblem build_ncf_lp(const EmpiricalModel& e) {
  require_discrete(e);
  const auto& s = e.scenario();
  const auto globals = enumerate_global_assignments(s);
  std::size_t rows = 0;
  std::vector<std::vector<Assignment>> outcomes;
  for (const auto& c : s.contexts()) {
    outcomes.push_back(enumerate_assignments(s, c));
    rows += outcomes.back().size();
  }

  LpProblem p;
  const auto n = static_cast<Eigen::Index>(globals.size());
  p.objective = Eigen::VectorXd::Ones(n);
  p.constraints = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows), n);
  p.rhs.resize(static_cast<Eigen::Index>(rows));
  p.senses.assign(rows, RowSense::LessEqual);
  p.maximize = true;

  Eigen::Index offset = 0;
  for (std::size_t ci = 0; ci < s.contexts().size(); ++ci) {
    const auto& c = s.context(ci);
    const auto& t = e.table(ci);
    for (std::size_t r = 0; r < outcomes[ci].size(); ++r) p.rhs(offset + static_cast<Eigen::Index>(r)) = t.prob(outcomes[ci][r]);
    for (Eigen::Index g = 0; g < n; ++g) {
      const auto rank = assignment_rank(s, restrict(globals[static_cast<std::size_t>(g)], c));
      p.constraints(offset + static_cast<Eigen::Index>(rank), g) = 1.0;
    }
    offset += static_cast<Eigen::Index>(outcomes[ci].size());
  }
  return p;
}

NCFResult ncf(const EmpiricalModel& e, double tol) {
  const LpProblem p = build_ncf_lp(e);
  const LpSolution sol = solve_lp(p, tol);
  if (sol.status != SolveStatus::Optimal) throw SolverError("noncontextual-fraction LP: " + to_string(sol.status));

  const auto& s = e.scenario();
  const auto globals = enumerate_global_assignments(s);
  NCFResult r;
  r.ncf = std::clamp(sol.value, 0.0, 1.0);
  r.cf = 1.0 - r.ncf;
  std::vector<double> mass(globals.size());
  for (std::size_t g = 0; g < globals.size(); ++g) mass[g] = std::max(0.0, sol.primal(static_cast<Eigen::Index>(g)));
  r.witness = DiscreteTable::canonical(s.all_measurements(), globals, mass);

  Eigen::Index offset = 0;
  for (const auto& c : s.contexts()) {
    ContextFunction f;
    f.context = c;
    f.outcomes = enumerate_assignments(s, c);
    for (std::size_t i = 0; i < f.outcomes.size(); ++i) f.values.push_back(std::max(0.0, sol.dual(offset + static_cast<Eigen::Index>(i))));
    offset += static_cast<Eigen::Index>(f.outcomes.size());
    r.dual_witness.push_back(std::move(f));
  }
  r.dual_value = sol.dual_value;
  r.duality_gap = sol.gap;
  r.iterations = sol.iterations;
  return r;
}

double BellInequality::norm() const {
  double n = 0.0;
  for (const auto& b : beta) n += b.sup();
  return n;
}

BellInequality bell_from_dual(const MeasurementScenario& s, const std::vector<ContextFunction>& f) {
  if (f.size() != s.contexts().size()) throw InvalidArgument("one dual function per maximal context expected");
  const double w = 1.0 / static_cast<double>(s.contexts().size());
  BellInequality b;
  for (const auto& fc : f) {
    ContextFunction bc = fc;
    for (auto& v : bc.values) v = w - v;
    b.beta.push_back(std::move(bc));
  }
  return b;
}

BellInequality extract_bell(const EmpiricalModel& e, double tol) {
  return bell_from_dual(e.scenario(), ncf(e, tol).dual_witness);
}

double pairing(const BellInequality& b, const EmpiricalModel& e) {
  require_discrete(e);
  if (b.beta.size() != e.scenario().contexts().size()) throw InvalidArgument("inequality and model differ in contexts");
  double v = 0.0;
  for (std::size_t ci = 0; ci < b.beta.size(); ++ci) {
    const auto& t = e.table(ci);
    if (b.beta[ci].context != t.context) throw InvalidArgument("inequality and model differ in contexts");
    for (std::size_t i = 0; i < t.support.size(); ++i) v += b.beta[ci].at(t.support[i]) * t.probs[i];
  }
  return v;
}

double max_global_excess(const BellInequality& b, const MeasurementScenario& s) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& g : enumerate_global_assignments(s)) {
    double v = 0.0;
    for (const auto& bc : b.beta) v += bc.at(restrict(g, bc.context));
    worst = std::max(worst, v - b.bound);
  }
  return worst;
}

double normalized_violation(const BellInequality& b, const EmpiricalModel& e) {
  const double num = std::max(0.0, pairing(b, e) - b.bound);
  if (num == 0.0) return 0.0;
  const double den = b.norm() - b.bound;
  if (den <= 0.0) throw InvalidArgument("normalised violation: ||beta|| - R is not positive");
  return num / den;
}

}  // namespace cfrac
