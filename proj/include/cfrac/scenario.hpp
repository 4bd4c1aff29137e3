#pragma once

// Measurement scenarios, contexts and the event sheaf on assignments.

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cfrac/error.hpp"

namespace cfrac {

/// A set of measurements, stored as strictly increasing measurement indices.
using Context = std::vector<std::size_t>;

bool is_subset(const Context& u, const Context& v);
Context context_union(const Context& u, const Context& v);
Context context_intersection(const Context& u, const Context& v);

/// Outcome space of a single measurement: a finite set of reals or a
/// bounded closed interval.
struct OutcomeSpace {
  enum class Kind { Finite, Interval };

  Kind kind = Kind::Finite;
  std::vector<double> values;  // Finite only, strictly increasing
  double lo = 0.0;             // Interval only
  double hi = 0.0;

  static OutcomeSpace finite(std::vector<double> values);
  static OutcomeSpace interval(double lo, double hi);

  bool is_finite() const { return kind == Kind::Finite; }
  std::size_t size() const { return values.size(); }
  bool contains(double v) const;
  std::optional<std::size_t> index_of(double v) const;
  double min() const;
  double max() const;

  bool operator==(const OutcomeSpace&) const = default;
};

/// Unvalidated scenario description, as read from a file.
struct ScenarioSpec {
  std::vector<std::string> measurements;
  std::vector<std::vector<std::string>> contexts;
  std::map<std::string, OutcomeSpace> outcomes;
};

struct ValidationIssue {
  enum class Kind {
    Empty,
    DuplicateLabel,
    UnknownLabel,
    MissingOutcomeSpace,
    NotACover,
    NotAnAntichain,
    EmptyOutcomeSpace,
    UnsortedOutcomes,
    DegenerateInterval,
  };
  Kind kind;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;

  bool ok() const { return issues.empty(); }
  bool has(ValidationIssue::Kind kind) const;
  std::string summary() const;
};

ValidationReport validate_scenario(const ScenarioSpec& spec);

class InvalidScenario : public Error {
 public:
  explicit InvalidScenario(ValidationReport report);
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

/// A validated measurement scenario (X, M, O).
///
/// Maximal contexts keep the order in which they were declared; the members
/// of each context are sorted by measurement index. Immutable once built.
class MeasurementScenario {
 public:
  /// Throws InvalidScenario when `validate_scenario(spec)` reports anything.
  static MeasurementScenario build(const ScenarioSpec& spec);

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(std::size_t x) const { return labels_.at(x); }
  std::optional<std::size_t> index_of(const std::string& label) const;
  std::size_t require_index(const std::string& label) const;

  const std::vector<Context>& contexts() const { return contexts_; }
  const Context& context(std::size_t i) const { return contexts_.at(i); }
  std::optional<std::size_t> context_index(const Context& c) const;

  const OutcomeSpace& outcome_space(std::size_t x) const { return outcomes_.at(x); }
  const std::vector<OutcomeSpace>& outcome_spaces() const { return outcomes_; }
  bool all_finite() const;

  Context all_measurements() const;
  std::string describe(const Context& c) const;
  ScenarioSpec spec() const;

  bool operator==(const MeasurementScenario&) const = default;

 private:
  MeasurementScenario() = default;

  std::vector<std::string> labels_;
  std::vector<Context> contexts_;
  std::vector<OutcomeSpace> outcomes_;
};

ValidationReport validate_scenario(const MeasurementScenario& s);

/// Downward closure of the maximal contexts, including the empty context,
/// sorted by size and then lexicographically.
std::vector<Context> enumerate_contexts(const MeasurementScenario& s);

/// A section of the event sheaf: one outcome for each measurement of `domain`.
struct Assignment {
  Context domain;
  std::vector<double> values;  // aligned with domain

  double at(std::size_t measurement) const;

  bool operator==(const Assignment&) const = default;
  auto operator<=>(const Assignment&) const = default;
};

bool assignment_valid(const MeasurementScenario& s, const Assignment& o);

/// Projection onto the sub-domain `u`.
Assignment restrict(const Assignment& o, const Context& u);

/// Raised by glue() when two sections disagree on an overlap.
class IncompatibleSections : public Error {
 public:
  IncompatibleSections(std::size_t first, std::size_t second, std::size_t measurement);
  std::size_t first() const { return first_; }
  std::size_t second() const { return second_; }
  std::size_t measurement() const { return measurement_; }

 private:
  std::size_t first_;
  std::size_t second_;
  std::size_t measurement_;
};

/// The unique section on the union of the domains restricting to every input.
Assignment glue(std::span<const Assignment> sections);

/// Every joint outcome of `c`, lexicographic in outcome indices (last
/// measurement varies fastest). Requires finite outcome spaces on `c`.
std::vector<Assignment> enumerate_assignments(const MeasurementScenario& s, const Context& c);

/// Every global assignment of O_X in lexicographic order of outcome indices.
std::vector<Assignment> enumerate_global_assignments(const MeasurementScenario& s);

/// Position of `o` in enumerate_assignments(s, o.domain).
std::size_t assignment_rank(const MeasurementScenario& s, const Assignment& o);

}  // namespace cfrac
