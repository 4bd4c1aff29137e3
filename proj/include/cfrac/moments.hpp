#pragma once

// Truncated moment sequences, moment matrices and localising matrices.

#include <Eigen/Dense>
#include <functional>
#include <iosfwd>
#include <map>
#include <vector>

#include "cfrac/empirical.hpp"
#include "cfrac/measures.hpp"
#include "cfrac/multi_index.hpp"
#include "cfrac/scenario.hpp"

namespace cfrac {

/// y_alpha for every |alpha| <= degree over the variables `vars`, stored in
/// graded-lexicographic order. Coordinate i of alpha refers to vars[i].
struct MomentSequence {
  Context vars;
  int degree = 0;
  std::vector<double> values;

  int dim() const { return static_cast<int>(vars.size()); }
  MultiIndexSet indices() const { return MultiIndexSet(dim(), degree); }
  double at(const MultiIndex& alpha) const;

  static MomentSequence from(Context vars, int degree, const std::function<double(const MultiIndex&)>& f);

  bool operator==(const MomentSequence&) const = default;
};

MomentSequence operator-(const MomentSequence& a, const MomentSequence& b);

struct MomentMatrix {
  int order = 0;
  int dim = 0;  // rows and columns follow MultiIndexSet(dim, order)
  Eigen::MatrixXd m;
};

/// Polynomial in `dim` variables by its nonzero coefficients.
struct Polynomial {
  int dim = 0;
  std::map<MultiIndex, double> coeffs;

  int degree() const;
  double operator()(const std::vector<double>& x) const;
};

/// (x_j - lo)(hi - x_j), nonnegative exactly on lo <= x_j <= hi.
Polynomial box_polynomial(int dim, int j, double lo, double hi);

/// (M_k(y))_{alpha beta} = y_{alpha + beta}. Needs degree(y) >= 2k.
MomentMatrix moment_matrix(const MomentSequence& y, int k);

/// (M_k(p y))_{alpha beta} = sum_gamma p_gamma y_{alpha + beta + gamma}.
/// Needs degree(y) >= 2k + deg(p).
MomentMatrix localising_matrix(const MomentSequence& y, const Polynomial& p, int k);

/// Moments of the marginal on `c`, read off the entries of y that only
/// involve c's variables.
MomentSequence restrict_moments(const MomentSequence& y, const Context& c);

/// Moments of one context's measure up to `degree`; tables count as Dirac
/// mixtures at their numeric outcomes.
MomentSequence context_moments(const MeasureDesc& m, int degree);
MomentSequence context_moments(const DiscreteTable& t, int degree);
MomentSequence context_moments(const ContextData& d, int degree);

/// Dense text dump: a header line "order dim size" then one row per line.
void write_matrix_text(std::ostream& os, const MomentMatrix& m);

}  // namespace cfrac
