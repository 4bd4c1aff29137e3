#pragma once

// The moment relaxations SP_k and their sum-of-squares duals SD_k, whose
// values bound NCF(e) from above and decrease towards it as k grows.

#include <optional>
#include <vector>

#include "cfrac/empirical.hpp"
#include "cfrac/moments.hpp"
#include "cfrac/solvers/sdp.hpp"

namespace cfrac {

inline constexpr int kMaxHierarchyDim = 8;

struct HierarchyConfig {
  int k_min = 1;
  int k_max = 3;
  SdpOptions solver;
  int compatibility_degree = kDefaultCompatibilityDegree;
  double compatibility_tol = 1e-9;
  bool solve_dual = false;
  bool parallel = false;

  /// Throws InvalidArgument unless 1 <= k_min <= k_max.
  void validate() const;
};

struct LevelBound {
  int k = 0;
  double value = 0.0;  // sup SP_k
  SolveStatus status = SolveStatus::NumericalFailure;
  double seconds = 0.0;
  int iterations = 0;
  std::optional<double> dual_value;  // inf SD_k
  std::optional<SolveStatus> dual_status;
};

struct HierarchyResult {
  std::vector<LevelBound> bounds;  // increasing k
  double ncf_upper = 1.0;          // smallest value over optimal levels (1 if none)
  double cf_lower = 0.0;
  bool monotone = true;            // value(k+1) <= value(k) + 1e-6
  bool weak_duality_ok = true;     // SP_k <= SD_k + 1e-6 wherever both solved
};

/// Real coordinates per measurement with the interval they live in; finite
/// outcome sets use [min value, max value].
struct VariableBox {
  double lo = 0.0;
  double hi = 0.0;
};
std::vector<VariableBox> variable_boxes(const MeasurementScenario& s);

/// Index layout shared by SP_k and SD_k.
///
/// Blocks: one per maximal context (order k over the context's variables),
/// then the global moment matrix (order k over all d variables), then one
/// localising block per variable (order k - 1). Variables / constraints are
/// the moments y_gamma, gamma in N^d_{2k}.
struct HierarchyLayout {
  int d = 0;
  int k = 0;
  std::vector<int> block_sizes;
  std::size_t num_moments = 0;
  int global_block() const;
  int localising_block(int j) const;
};
HierarchyLayout hierarchy_layout(const MeasurementScenario& s, int k);

/// SP_k: maximise y_0 s.t. M_k(y^{e,C} - y|C) >= 0 for every maximal C,
/// M_k(y) >= 0 and M_{k-1}(p_j y) >= 0 for every box polynomial p_j. Stated
/// as a linear matrix inequality (the dual side of SdpProblem); its optimum
/// is SdpSolution::dual_value.
SdpProblem assemble_sp(const EmpiricalModel& e, int k);

/// SD_k: Gram matrices Q_C (order k over C), S_0 (order k) and S_j (order
/// k - 1) with sum_C z_C^T Q_C z_C - 1 = z^T S_0 z + sum_j p_j z^T S_j z
/// coefficient by coefficient; minimise sum_C <M_k(y^{e,C}), Q_C>. Stated on
/// the primal side of SdpProblem; its optimum is SdpSolution::primal_value.
SdpProblem assemble_sd(const EmpiricalModel& e, int k);

/// Solves SP_k (and SD_k when asked) for k_min..k_max. Throws
/// InvalidArgument for incompatible models or too many measurements.
HierarchyResult run_hierarchy(const EmpiricalModel& e, const HierarchyConfig& cfg);

}  // namespace cfrac
