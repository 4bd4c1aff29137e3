#pragma once

// Standard models on the CHSH (bipartite, two settings per party) scenario.

#include <array>

#include "cfrac/empirical.hpp"

namespace cfrac {

/// Measurements a0, a1, b0, b1; maximal contexts {ax, by} in the order
/// (a0,b0), (a0,b1), (a1,b0), (a1,b1). Outcomes are {-1, +1}, or the
/// interval [-1, 1] when `continuous` is set.
MeasurementScenario chsh_scenario(bool continuous = false);

/// Model with uniform single-party marginals and correlators E_xy; context
/// (ax, by) gets p(a, b) = (1 + a b E_xy) / 4.
EmpiricalModel correlator_box(const std::array<double, 4>& correlators);

/// E = (1, 1, 1, -1): every context perfectly (anti)correlated.
EmpiricalModel pr_box();
/// E = (1, 1, 1, -1) / sqrt(2): the quantum maximum of CHSH.
EmpiricalModel tsirelson_box();
/// All cells 1/4.
EmpiricalModel uniform_noise_box();

/// The tables of a discrete CHSH model as Dirac mixtures on [-1, 1].
EmpiricalModel dirac_embedding(const EmpiricalModel& discrete);

/// Every measurement independent and uniform on [-1, 1].
EmpiricalModel uniform_box_product();

}  // namespace cfrac
