#pragma once

// Finite hidden-variable models and the constructions behind the
// Fine-Abramsky-Brandenburger equivalence: extendable <=> deterministic HV
// model <=> factorisable HV model.

#include <string>
#include <vector>

#include "cfrac/empirical.hpp"

namespace cfrac {

inline constexpr double kHvTol = 1e-12;

struct HiddenVariableModel {
  MeasurementScenario scenario;  // finite outcome spaces only
  std::vector<std::string> lambdas;
  std::vector<double> prior;  // aligned with lambdas
  /// kernels[c][l]: distribution on maximal context c given lambdas[l].
  std::vector<std::vector<DiscreteTable>> kernels;

  /// Throws InvalidArgument on a bad prior, malformed kernels or a
  /// parameter-independence violation above kHvTol.
  void validate() const;
};

struct HvClass {
  bool deterministic = false;
  bool factorisable = false;
};

/// e_C(o) = sum_l p(l) k_C(l, o).
EmpiricalModel hv_to_empirical(const HiddenVariableModel& h);

HvClass classify_hv(const HiddenVariableModel& h);

/// Lambda = support of mu, prior = mu, kernels = point masses at g|C.
HiddenVariableModel global_to_deterministic_hv(const DiscreteTable& mu, const MeasurementScenario& s);

/// mu(g) = sum_l p(l) prod_x k_x(l, g(x)), where k_x is the single-measurement
/// marginal of any kernel whose context contains x. Throws InvalidArgument
/// for non-factorisable input.
DiscreteTable factorisable_hv_to_global(const HiddenVariableModel& h);

/// Marginals of a global table on every maximal context.
EmpiricalModel marginal_model(const DiscreteTable& mu, const MeasurementScenario& s);

}  // namespace cfrac
