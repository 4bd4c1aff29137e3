#pragma once

// Probability measures on the outcome space of a context: finite tables and
// the three continuous descriptions with closed-form moments.

#include <map>
#include <variant>
#include <vector>

#include "cfrac/multi_index.hpp"
#include "cfrac/scenario.hpp"

namespace cfrac {

inline constexpr double kNormalizationTol = 1e-12;

/// Finitely supported probability on the joint outcomes of a context.
///
/// Tables built by the library are canonical: support sorted, no duplicates,
/// no zero-probability entries.
struct DiscreteTable {
  Context context;
  std::vector<Assignment> support;
  std::vector<double> probs;

  /// Sorts the support, merges duplicates and drops zero entries.
  static DiscreteTable canonical(Context context, std::vector<Assignment> support, std::vector<double> probs);

  double prob(const Assignment& o) const;
  double total() const;

  bool operator==(const DiscreteTable&) const = default;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool operator==(const Interval&) const = default;
};

/// Convex combination of point masses; points are aligned with `context`.
struct DiracMixture {
  Context context;
  std::vector<std::vector<double>> points;
  std::vector<double> weights;
  bool operator==(const DiracMixture&) const = default;
};

/// Convex combination of uniform distributions on axis-aligned boxes.
struct UniformBoxMixture {
  Context context;
  std::vector<std::vector<Interval>> boxes;
  std::vector<double> weights;
  bool operator==(const UniformBoxMixture&) const = default;
};

/// A measure known only through its moments up to `degree`.
struct RawMoments {
  Context context;
  int degree = 0;
  std::map<MultiIndex, double> values;
  bool operator==(const RawMoments&) const = default;
};

using MeasureDesc = std::variant<DiracMixture, UniformBoxMixture, RawMoments>;

const Context& context_of(const MeasureDesc& m);

/// Throws InvalidArgument describing the first broken invariant. `s` supplies
/// the outcome spaces the data must live in.
void validate(const DiscreteTable& t, const MeasurementScenario& s);
void validate(const MeasureDesc& m, const MeasurementScenario& s);

/// Pushforward along the projection onto `u`.
DiscreteTable marginalize(const DiscreteTable& t, const Context& u);

/// Integral of x^alpha; alpha is indexed like the context's measurements.
double moment(const MeasureDesc& m, const MultiIndex& alpha);
/// Table outcomes are used as real coordinates (a Dirac mixture).
double moment(const DiscreteTable& t, const MultiIndex& alpha);

DiracMixture as_dirac(const DiscreteTable& t);

/// Partition of an interval into cells [c_0,c_1), ..., [c_{n-1}, c_n].
/// Cell i is reported as labels[i].
struct BinSpec {
  std::vector<double> cuts;
  std::vector<double> labels;

  static BinSpec with_index_labels(std::vector<double> cuts);
  std::size_t cells() const { return cuts.empty() ? 0 : cuts.size() - 1; }
  /// Cell containing v, nullopt if v lies outside [c_0, c_n].
  std::optional<std::size_t> cell_of(double v) const;
  void validate() const;
  bool operator==(const BinSpec&) const = default;
};

/// Bins per measurement index.
using BinMap = std::map<std::size_t, BinSpec>;

/// Pushforward of `m` along the binning maps. Dirac atoms keep their value on
/// coordinates without a bin spec; box mixtures need every coordinate binned
/// and raw moments cannot be binned.
DiscreteTable bin(const MeasureDesc& m, const BinMap& bins);
/// Coordinates without a bin spec keep their outcome.
DiscreteTable bin(const DiscreteTable& t, const BinMap& bins);

}  // namespace cfrac
