#pragma once

// Reference computations and random model generators for the tests. The
// oracles deliberately avoid the library's NCF code paths.

#include <array>
#include <random>
#include <vector>

#include "cfrac/catalog.hpp"
#include "cfrac/fab.hpp"
#include "cfrac/lp_cf.hpp"
#include "cfrac/measures.hpp"

namespace cfrac::testing {

using Rng = std::mt19937_64;

/// Exact NCF of a model whose contexts are tables or Dirac mixtures. The LP
/// is set up directly over the product grid of atom coordinates: every
/// global point mass below e restricts to atoms in each context.
double grid_ncf(const EmpiricalModel& e);

/// True when no deterministic global assignment of CHSH is consistent with
/// the support of every context table, so that NCF must vanish.
bool no_deterministic_assignment_fits(const EmpiricalModel& e);

/// The 16 local deterministic boxes and the 8 PR-type boxes: the vertices of
/// the CHSH no-signalling polytope, as correlator/marginal tables.
std::vector<EmpiricalModel> chsh_ns_vertices();

/// Random convex combination of a few no-signalling vertices.
EmpiricalModel random_chsh_model(Rng& rng);

/// Random combination of local deterministic boxes only (NCF = 1).
EmpiricalModel random_local_chsh_model(Rng& rng);

/// Random discrete CHSH model relabelled to Dirac atoms at random distinct
/// points of [-1, 1] (two per measurement), on the continuous scenario.
EmpiricalModel random_dirac_chsh_model(Rng& rng);

/// Random factorisable hidden-variable model on CHSH with `n` hidden values.
HiddenVariableModel random_factorisable_hv(Rng& rng, int n);

/// Random Dirac or uniform-box mixture in `dim` coordinates inside [lo, hi]
/// per coordinate.
MeasureDesc random_measure(Rng& rng, int dim, const std::vector<Interval>& box);

/// A random valid inequality (beta, 0) for CHSH: random beta shifted so that
/// the largest global sum is exactly 0.
BellInequality random_bell_inequality(Rng& rng, const MeasurementScenario& s);

}  // namespace cfrac::testing
