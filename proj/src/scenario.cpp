#include "cfrac/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace cfrac {

bool is_subset(const Context& u, const Context& v) {
  return std::includes(v.begin(), v.end(), u.begin(), u.end());
}

Context context_union(const Context& u, const Context& v) {
  Context out;
  std::set_union(u.begin(), u.end(), v.begin(), v.end(), std::back_inserter(out));
  return out;
}

Context context_intersection(const Context& u, const Context& v) {
  Context out;
  std::set_intersection(u.begin(), u.end(), v.begin(), v.end(), std::back_inserter(out));
  return out;
}

// ---------------------------------------------------------------------------
// OutcomeSpace

OutcomeSpace OutcomeSpace::finite(std::vector<double> values) {
  OutcomeSpace o;
  o.kind = Kind::Finite;
  o.values = std::move(values);
  return o;
}

OutcomeSpace OutcomeSpace::interval(double lo, double hi) {
  OutcomeSpace o;
  o.kind = Kind::Interval;
  o.lo = lo;
  o.hi = hi;
  return o;
}

bool OutcomeSpace::contains(double v) const {
  if (is_finite()) return index_of(v).has_value();
  return v >= lo && v <= hi;
}

std::optional<std::size_t> OutcomeSpace::index_of(double v) const {
  auto it = std::lower_bound(values.begin(), values.end(), v);
  if (it == values.end() || *it != v) return std::nullopt;
  return static_cast<std::size_t>(it - values.begin());
}

double OutcomeSpace::min() const { return is_finite() ? values.front() : lo; }
double OutcomeSpace::max() const { return is_finite() ? values.back() : hi; }

// ---------------------------------------------------------------------------
// Validation

bool ValidationReport::has(ValidationIssue::Kind kind) const {
  return std::any_of(issues.begin(), issues.end(),
                     [kind](const ValidationIssue& i) { return i.kind == kind; });
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < issues.size(); ++i) {
    if (i) os << "; ";
    os << issues[i].message;
  }
  return os.str();
}

namespace {

std::string join_labels(const std::vector<std::string>& labels) {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (i) os << ',';
    os << labels[i];
  }
  os << '}';
  return os.str();
}

}  // namespace

ValidationReport validate_scenario(const ScenarioSpec& spec) {
  using K = ValidationIssue::Kind;
  ValidationReport report;
  auto add = [&](K kind, std::string msg) { report.issues.push_back({kind, std::move(msg)}); };

  if (spec.measurements.empty()) add(K::Empty, "scenario has no measurements");
  if (spec.contexts.empty()) add(K::Empty, "scenario has no maximal contexts");

  std::set<std::string> known;
  for (const auto& m : spec.measurements) {
    if (!known.insert(m).second) add(K::DuplicateLabel, "duplicate measurement label '" + m + "'");
  }

  std::vector<std::set<std::string>> sets;
  for (std::size_t i = 0; i < spec.contexts.size(); ++i) {
    std::set<std::string> c;
    for (const auto& m : spec.contexts[i]) {
      if (!known.count(m)) {
        add(K::UnknownLabel, "context " + join_labels(spec.contexts[i]) + " uses unknown label '" + m + "'");
      }
      if (!c.insert(m).second) {
        add(K::DuplicateLabel, "context " + join_labels(spec.contexts[i]) + " repeats '" + m + "'");
      }
    }
    if (c.empty()) add(K::Empty, "maximal context #" + std::to_string(i) + " is empty");
    sets.push_back(std::move(c));
  }

  std::set<std::string> covered;
  for (const auto& c : sets) covered.insert(c.begin(), c.end());
  for (const auto& m : spec.measurements) {
    if (!covered.count(m)) add(K::NotACover, "measurement '" + m + "' is not in any maximal context");
  }

  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (std::size_t j = 0; j < sets.size(); ++j) {
      if (i == j) continue;
      bool sub = std::includes(sets[j].begin(), sets[j].end(), sets[i].begin(), sets[i].end());
      if (!sub) continue;
      if (sets[i].size() < sets[j].size()) {
        add(K::NotAnAntichain, "context " + join_labels(spec.contexts[i]) + " is a proper subset of " +
                                   join_labels(spec.contexts[j]));
      } else if (i < j) {
        add(K::NotAnAntichain, "context " + join_labels(spec.contexts[i]) + " is declared twice");
      }
    }
  }

  for (const auto& m : spec.measurements) {
    auto it = spec.outcomes.find(m);
    if (it == spec.outcomes.end()) {
      add(K::MissingOutcomeSpace, "measurement '" + m + "' has no outcome space");
      continue;
    }
    const OutcomeSpace& o = it->second;
    if (o.is_finite()) {
      if (o.values.empty()) add(K::EmptyOutcomeSpace, "outcome set of '" + m + "' is empty");
      bool finite = std::all_of(o.values.begin(), o.values.end(), [](double v) { return std::isfinite(v); });
      bool sorted = std::adjacent_find(o.values.begin(), o.values.end(), std::greater_equal<>()) == o.values.end();
      if (!finite || !sorted) {
        add(K::UnsortedOutcomes, "outcomes of '" + m + "' must be finite and strictly increasing");
      }
    } else if (!(std::isfinite(o.lo) && std::isfinite(o.hi) && o.lo < o.hi)) {
      add(K::DegenerateInterval, "interval of '" + m + "' must satisfy lo < hi with finite ends");
    }
  }
  for (const auto& [label, space] : spec.outcomes) {
    if (!known.count(label)) add(K::UnknownLabel, "outcome space given for unknown label '" + label + "'");
  }
  return report;
}

InvalidScenario::InvalidScenario(ValidationReport report)
    : Error("invalid scenario: " + report.summary()), report_(std::move(report)) {}

// ---------------------------------------------------------------------------
// MeasurementScenario

MeasurementScenario MeasurementScenario::build(const ScenarioSpec& spec) {
  ValidationReport report = validate_scenario(spec);
  if (!report.ok()) throw InvalidScenario(std::move(report));

  MeasurementScenario s;
  s.labels_ = spec.measurements;
  for (const auto& m : s.labels_) s.outcomes_.push_back(spec.outcomes.at(m));
  for (const auto& labels : spec.contexts) {
    Context c;
    for (const auto& m : labels) c.push_back(*s.index_of(m));
    std::sort(c.begin(), c.end());
    s.contexts_.push_back(std::move(c));
  }
  return s;
}

std::optional<std::size_t> MeasurementScenario::index_of(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - labels_.begin());
}

std::size_t MeasurementScenario::require_index(const std::string& label) const {
  auto i = index_of(label);
  if (!i) throw InvalidArgument("unknown measurement label '" + label + "'");
  return *i;
}

std::optional<std::size_t> MeasurementScenario::context_index(const Context& c) const {
  auto it = std::find(contexts_.begin(), contexts_.end(), c);
  if (it == contexts_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - contexts_.begin());
}

bool MeasurementScenario::all_finite() const {
  return std::all_of(outcomes_.begin(), outcomes_.end(), [](const OutcomeSpace& o) { return o.is_finite(); });
}

Context MeasurementScenario::all_measurements() const {
  Context all(size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return all;
}

std::string MeasurementScenario::describe(const Context& c) const {
  std::vector<std::string> names;
  for (auto x : c) names.push_back(label(x));
  return join_labels(names);
}

ScenarioSpec MeasurementScenario::spec() const {
  ScenarioSpec spec;
  spec.measurements = labels_;
  for (const auto& c : contexts_) {
    std::vector<std::string> names;
    for (auto x : c) names.push_back(labels_[x]);
    spec.contexts.push_back(std::move(names));
  }
  for (std::size_t x = 0; x < size(); ++x) spec.outcomes.emplace(labels_[x], outcomes_[x]);
  return spec;
}

ValidationReport validate_scenario(const MeasurementScenario& s) { return validate_scenario(s.spec()); }

std::vector<Context> enumerate_contexts(const MeasurementScenario& s) {
  std::set<Context> seen;
  for (const auto& c : s.contexts()) {
    const std::size_t n = c.size();
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
      Context sub;
      for (std::size_t i = 0; i < n; ++i) {
        if (mask & (std::size_t{1} << i)) sub.push_back(c[i]);
      }
      seen.insert(std::move(sub));
    }
  }
  std::vector<Context> out(seen.begin(), seen.end());
  std::stable_sort(out.begin(), out.end(),
                   [](const Context& a, const Context& b) { return a.size() < b.size(); });
  return out;
}

// ---------------------------------------------------------------------------
// Assignments

double Assignment::at(std::size_t measurement) const {
  auto it = std::lower_bound(domain.begin(), domain.end(), measurement);
  if (it == domain.end() || *it != measurement) {
    throw InvalidArgument("assignment has no value for measurement " + std::to_string(measurement));
  }
  return values[static_cast<std::size_t>(it - domain.begin())];
}

bool assignment_valid(const MeasurementScenario& s, const Assignment& o) {
  if (o.domain.size() != o.values.size()) return false;
  if (!std::is_sorted(o.domain.begin(), o.domain.end()) ||
      std::adjacent_find(o.domain.begin(), o.domain.end()) != o.domain.end()) {
    return false;
  }
  for (std::size_t i = 0; i < o.domain.size(); ++i) {
    if (o.domain[i] >= s.size() || !s.outcome_space(o.domain[i]).contains(o.values[i])) return false;
  }
  return true;
}

Assignment restrict(const Assignment& o, const Context& u) {
  Assignment r;
  r.domain = u;
  r.values.reserve(u.size());
  std::size_t j = 0;
  for (auto x : u) {
    while (j < o.domain.size() && o.domain[j] < x) ++j;
    if (j == o.domain.size() || o.domain[j] != x) {
      throw InvalidArgument("restriction target is not a subset of the assignment's domain");
    }
    r.values.push_back(o.values[j]);
  }
  return r;
}

IncompatibleSections::IncompatibleSections(std::size_t first, std::size_t second, std::size_t measurement)
    : Error("sections #" + std::to_string(first) + " and #" + std::to_string(second) +
            " disagree on measurement " + std::to_string(measurement)),
      first_(first),
      second_(second),
      measurement_(measurement) {}

Assignment glue(std::span<const Assignment> sections) {
  // measurement -> (value, index of the section that first fixed it)
  std::map<std::size_t, std::pair<double, std::size_t>> merged;
  for (std::size_t i = 0; i < sections.size(); ++i) {
    const Assignment& o = sections[i];
    if (o.domain.size() != o.values.size()) throw InvalidArgument("malformed assignment");
    for (std::size_t j = 0; j < o.domain.size(); ++j) {
      auto [it, inserted] = merged.try_emplace(o.domain[j], o.values[j], i);
      if (!inserted && it->second.first != o.values[j]) {
        throw IncompatibleSections(it->second.second, i, o.domain[j]);
      }
    }
  }
  Assignment out;
  for (const auto& [x, v] : merged) {
    out.domain.push_back(x);
    out.values.push_back(v.first);
  }
  return out;
}

std::vector<Assignment> enumerate_assignments(const MeasurementScenario& s, const Context& c) {
  std::size_t total = 1;
  for (auto x : c) {
    const OutcomeSpace& o = s.outcome_space(x);
    if (!o.is_finite()) {
      throw InvalidArgument("measurement '" + s.label(x) + "' has a continuous outcome space");
    }
    total *= o.size();
  }
  std::vector<Assignment> out;
  out.reserve(total);
  std::vector<std::size_t> idx(c.size(), 0);
  for (std::size_t n = 0; n < total; ++n) {
    Assignment a;
    a.domain = c;
    for (std::size_t i = 0; i < c.size(); ++i) a.values.push_back(s.outcome_space(c[i]).values[idx[i]]);
    out.push_back(std::move(a));
    for (std::size_t i = c.size(); i-- > 0;) {
      if (++idx[i] < s.outcome_space(c[i]).size()) break;
      idx[i] = 0;
    }
  }
  return out;
}

std::vector<Assignment> enumerate_global_assignments(const MeasurementScenario& s) {
  return enumerate_assignments(s, s.all_measurements());
}

std::size_t assignment_rank(const MeasurementScenario& s, const Assignment& o) {
  std::size_t rank = 0;
  for (std::size_t i = 0; i < o.domain.size(); ++i) {
    const OutcomeSpace& space = s.outcome_space(o.domain[i]);
    auto k = space.index_of(o.values[i]);
    if (!k) throw InvalidArgument("value outside the outcome set of '" + s.label(o.domain[i]) + "'");
    rank = rank * space.size() + *k;
  }
  return rank;
}

}  // namespace cfrac
