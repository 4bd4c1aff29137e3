#pragma once

// Multi-indices alpha in N^d and the graded-lexicographic monomial basis.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace cfrac {

using MultiIndex = std::vector<int>;

int total_degree(const MultiIndex& alpha);
MultiIndex add(const MultiIndex& a, const MultiIndex& b);
MultiIndex zero_index(std::size_t dim);
std::string to_string(const MultiIndex& alpha);  // "2,0,1"
MultiIndex parse_multi_index(const std::string& text);

/// Graded-lexicographic order: lower total degree first; within a degree the
/// exponent of the first variable decreases, then the second, and so on.
/// For d = 2 this lists 1, x1, x2, x1^2, x1 x2, x2^2.
bool grlex_less(const MultiIndex& a, const MultiIndex& b);

/// Number of monomials of degree <= k in d variables: binomial(d + k, k).
std::size_t basis_size(int d, int k);

/// All alpha in N^d with |alpha| <= degree, in graded-lexicographic order.
class MultiIndexSet {
 public:
  MultiIndexSet(int dim, int degree);

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  std::size_t size() const { return indices_.size(); }
  const MultiIndex& operator[](std::size_t i) const { return indices_[i]; }
  auto begin() const { return indices_.begin(); }
  auto end() const { return indices_.end(); }

  /// Position of alpha, or nullopt if |alpha| > degree or dimensions differ.
  std::optional<std::size_t> find(const MultiIndex& alpha) const;
  std::size_t index_of(const MultiIndex& alpha) const;

 private:
  int dim_;
  int degree_;
  std::vector<MultiIndex> indices_;
  std::vector<std::size_t> degree_offset_;
};

}  // namespace cfrac
