#pragma once

// Plain-text listings of optimisation problems for external cross-checks.

#include <iosfwd>

#include "cfrac/solvers/lp.hpp"
#include "cfrac/solvers/sdp.hpp"

namespace cfrac {

/// Standard-form listing: objective, one line per row, variable bounds.
void write_lp_text(std::ostream& os, const LpProblem& p);

/// One line per nonzero: "matrix block row col value", 0-based, matrix 0 is C
/// and matrix i is A_i. Preceded by the block sizes and b.
void write_sdp_blocks(std::ostream& os, const SdpProblem& p);

}  // namespace cfrac
