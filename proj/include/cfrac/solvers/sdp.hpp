#pragma once

// Dense primal-dual interior-point solver for block-diagonal SDPs.
//
// Problems are stored in the usual primal/dual pair
//
//   (primal)  minimise <C, X>   s.t. <A_i, X> = b_i,  X >= 0
//   (dual)    maximise b^T y    s.t. Z = C - sum_i y_i A_i >= 0
//
// where every matrix is block diagonal with the same block structure. A
// linear matrix inequality "maximise c^T y s.t. F_0 + sum_i y_i F_i >= 0" is
// the dual side with C = F_0, A_i = -F_i, b = c (see LmiBuilder). Equality
// constrained Gram-matrix problems are the primal side.

#include <Eigen/Dense>
#include <iosfwd>
#include <vector>

#include "cfrac/solvers/lp.hpp"

namespace cfrac {

struct SparseEntry {
  int block = 0;
  int row = 0;  // row <= col; the symmetric partner is implied
  int col = 0;
  double value = 0.0;
};

/// Symmetric block-diagonal matrix given by its upper-triangular entries.
/// Repeated positions add up.
using SparseSymMatrix = std::vector<SparseEntry>;

struct SdpProblem {
  std::vector<int> block_sizes;
  SparseSymMatrix c;
  std::vector<SparseSymMatrix> a;
  Eigen::VectorXd b;

  int num_constraints() const { return static_cast<int>(a.size()); }
  /// Throws InvalidArgument on malformed data.
  void check() const;
};

/// Dense copy of one block of a sparse symmetric matrix.
Eigen::MatrixXd dense_block(const SparseSymMatrix& m, int block, int size);

struct SdpOptions {
  double tol = 1e-7;  // relative gap and relative infeasibilities
  int max_iterations = 200;
  bool verbose = false;  // one line per iteration on stderr
};

struct SdpSolution {
  SolveStatus status = SolveStatus::NumericalFailure;
  double primal_value = 0.0;  // <C, X>
  double dual_value = 0.0;    // b^T y
  double gap = 0.0;           // |primal_value - dual_value|
  double relative_gap = 0.0;
  double primal_infeasibility = 0.0;  // ||b - A(X)|| / (1 + ||b||)
  double dual_infeasibility = 0.0;    // ||C - A^T y - Z|| / (1 + ||C||)
  Eigen::VectorXd y;
  std::vector<Eigen::MatrixXd> x;
  std::vector<Eigen::MatrixXd> z;
  int iterations = 0;
};

/// HKM search direction with Mehrotra predictor-corrector, started from
/// scaled identities (infeasible start). On IterLimit or stalls the best
/// iterate seen is returned with that status.
SdpSolution solve_sdp(const SdpProblem& p, const SdpOptions& options = {});

/// Builds "maximise c^T y  s.t.  F_0(block) + sum_i y_i F_i(block) >= 0".
class LmiBuilder {
 public:
  explicit LmiBuilder(int num_variables);

  int add_block(int size);
  /// Adds v at (row, col) and its mirror to F_0.
  void add_constant(int block, int row, int col, double v);
  /// Adds v at (row, col) and its mirror to F_var.
  void add_term(int var, int block, int row, int col, double v);
  void set_objective(int var, double coefficient);

  SdpProblem build() const;

 private:
  SdpProblem p_;
};

/// Sparse SDPA text (".dat-s") for cross-checking with external solvers.
void write_sdpa_sparse(std::ostream& os, const SdpProblem& p);

}  // namespace cfrac
