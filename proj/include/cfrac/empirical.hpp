#pragma once

// Empirical models, the no-disturbance check and the free operations of the
// contextuality resource theory that the library supports: mixing, products
// and outcome translations (binning included).

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cfrac/measures.hpp"
#include "cfrac/scenario.hpp"

namespace cfrac {

using ContextData = std::variant<DiscreteTable, MeasureDesc>;

const Context& context_of(const ContextData& d);

/// One probability measure per maximal context.
///
/// Construction checks that every entry is a valid measure on its context;
/// compatibility on overlaps is left to check_compatibility() so that
/// signalling data can still be loaded and reported on.
class EmpiricalModel {
 public:
  EmpiricalModel(MeasurementScenario scenario, std::vector<ContextData> data);

  const MeasurementScenario& scenario() const { return scenario_; }
  const std::vector<ContextData>& data() const { return data_; }
  const ContextData& data(std::size_t context) const { return data_.at(context); }

  /// True when every entry is a DiscreteTable (and so every outcome space
  /// met by the model is finite).
  bool is_discrete() const;
  const DiscreteTable& table(std::size_t context) const;

  bool operator==(const EmpiricalModel&) const = default;

 private:
  MeasurementScenario scenario_;
  std::vector<ContextData> data_;
};

struct CompatibilityReport {
  bool compatible = true;
  double max_discrepancy = 0.0;
  std::optional<std::pair<std::size_t, std::size_t>> worst_pair;  // maximal-context indices
  Context overlap;                                                // of the worst pair
  std::string detail;
};

inline constexpr int kDefaultCompatibilityDegree = 6;

/// Compares the marginals of every pair of maximal contexts on their overlap.
/// Atomic data (tables, Dirac mixtures) is compared as exact overlap tables;
/// anything involving boxes or raw moments is compared through overlap
/// moments up to `degree`.
CompatibilityReport check_compatibility(const EmpiricalModel& e, double tol,
                                        int degree = kDefaultCompatibilityDegree);

/// lambda * e1 + (1 - lambda) * e2, context by context.
EmpiricalModel mix(const EmpiricalModel& e1, const EmpiricalModel& e2, double lambda);

/// Product model on the disjoint union of the two scenarios. When prefixes
/// are given every label is renamed to prefix + label first.
EmpiricalModel product(const EmpiricalModel& e1, const EmpiricalModel& e2, const std::string& prefix1 = "",
                       const std::string& prefix2 = "");
MeasurementScenario product(const MeasurementScenario& s1, const MeasurementScenario& s2,
                            const std::string& prefix1 = "", const std::string& prefix2 = "");

/// Outcome translation for one measurement: either an explicit map on a
/// finite outcome set or a binning of the outcome space.
struct ValueMap {
  std::vector<std::pair<double, double>> pairs;
  std::optional<double> apply(double v) const;
  bool operator==(const ValueMap&) const = default;
};
using OutcomeTranslation = std::variant<ValueMap, BinSpec>;
using TranslationMap = std::map<std::size_t, OutcomeTranslation>;

/// Pushforward along per-measurement outcome maps. Measurements without a
/// translation are left as they are.
EmpiricalModel translate_outcomes(const EmpiricalModel& e, const TranslationMap& t);

/// Binning: translate_outcomes with every given translation a BinSpec.
EmpiricalModel bin(const EmpiricalModel& e, const BinMap& bins);

/// For models made only of tables and Dirac mixtures: the same measures as
/// tables over finite outcome sets holding every atom coordinate. Any
/// subnormalised global measure below such a model lives on that grid, so
/// NCF can be computed exactly on the result. nullopt otherwise.
std::optional<EmpiricalModel> atomic_model(const EmpiricalModel& e);

}  // namespace cfrac
