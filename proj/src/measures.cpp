#include "cfrac/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace cfrac {

namespace {

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

void check_weights(const std::vector<double>& w, const char* what) {
  for (double x : w) {
    if (!std::isfinite(x) || x < 0.0) throw InvalidArgument(std::string(what) + ": negative or non-finite weight");
  }
  if (std::abs(sum(w) - 1.0) > kNormalizationTol) {
    throw InvalidArgument(std::string(what) + ": weights sum to " + std::to_string(sum(w)) + ", not 1");
  }
}

void check_context(const Context& c, const MeasurementScenario& s) {
  if (!std::is_sorted(c.begin(), c.end()) || std::adjacent_find(c.begin(), c.end()) != c.end()) {
    throw InvalidArgument("context indices must be strictly increasing");
  }
  if (!c.empty() && c.back() >= s.size()) throw InvalidArgument("context refers to an unknown measurement");
}

double power(double x, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

// Mean of x^n for x uniform on [a, b].
double uniform_moment(double a, double b, int n) {
  return (power(b, n + 1) - power(a, n + 1)) / ((n + 1) * (b - a));
}

double overlap(double a, double b, double c, double d) { return std::max(0.0, std::min(b, d) - std::max(a, c)); }

const BinSpec& require_bins(const BinMap& bins, std::size_t x) {
  auto it = bins.find(x);
  if (it == bins.end()) throw InvalidArgument("no bins given for measurement " + std::to_string(x));
  return it->second;
}

}  // namespace

DiscreteTable DiscreteTable::canonical(Context context, std::vector<Assignment> support, std::vector<double> probs) {
  if (support.size() != probs.size()) throw InvalidArgument("support and probabilities differ in length");
  std::map<Assignment, double> acc;
  for (std::size_t i = 0; i < support.size(); ++i) acc[support[i]] += probs[i];
  DiscreteTable t;
  t.context = std::move(context);
  for (auto& [o, p] : acc) {
    if (p == 0.0) continue;
    t.support.push_back(o);
    t.probs.push_back(p);
  }
  return t;
}

double DiscreteTable::prob(const Assignment& o) const {
  for (std::size_t i = 0; i < support.size(); ++i) {
    if (support[i] == o) return probs[i];
  }
  return 0.0;
}

double DiscreteTable::total() const { return sum(probs); }

const Context& context_of(const MeasureDesc& m) {
  return std::visit([](const auto& d) -> const Context& { return d.context; }, m);
}

void validate(const DiscreteTable& t, const MeasurementScenario& s) {
  check_context(t.context, s);
  if (t.support.size() != t.probs.size()) throw InvalidArgument("table support and probabilities differ in length");
  std::set<Assignment> seen;
  for (const auto& o : t.support) {
    if (o.domain != t.context) throw InvalidArgument("table entry has the wrong domain");
    if (!assignment_valid(s, o)) throw InvalidArgument("table entry outside the outcome spaces of " + s.describe(t.context));
    if (!seen.insert(o).second) throw InvalidArgument("duplicate table entry in " + s.describe(t.context));
  }
  check_weights(t.probs, "table");
}

void validate(const MeasureDesc& m, const MeasurementScenario& s) {
  const Context& c = context_of(m);
  check_context(c, s);
  if (const auto* d = std::get_if<DiracMixture>(&m)) {
    if (d->points.size() != d->weights.size()) throw InvalidArgument("dirac: points and weights differ in length");
    for (const auto& p : d->points) {
      if (p.size() != c.size()) throw InvalidArgument("dirac: atom has wrong dimension");
      for (std::size_t i = 0; i < p.size(); ++i) {
        if (!s.outcome_space(c[i]).contains(p[i])) {
          throw InvalidArgument("dirac: atom coordinate outside the outcome space of '" + s.label(c[i]) + "'");
        }
      }
    }
    check_weights(d->weights, "dirac");
  } else if (const auto* b = std::get_if<UniformBoxMixture>(&m)) {
    if (b->boxes.size() != b->weights.size()) throw InvalidArgument("uniform_boxes: boxes and weights differ in length");
    for (auto x : c) {
      if (s.outcome_space(x).is_finite()) {
        throw InvalidArgument("uniform_boxes: measurement '" + s.label(x) + "' has a finite outcome space");
      }
    }
    for (const auto& box : b->boxes) {
      if (box.size() != c.size()) throw InvalidArgument("uniform_boxes: box has wrong dimension");
      for (std::size_t i = 0; i < box.size(); ++i) {
        const OutcomeSpace& o = s.outcome_space(c[i]);
        if (!(box[i].lo < box[i].hi) || box[i].lo < o.lo || box[i].hi > o.hi) {
          throw InvalidArgument("uniform_boxes: side not a proper subinterval of the outcome space of '" +
                                s.label(c[i]) + "'");
        }
      }
    }
    check_weights(b->weights, "uniform_boxes");
  } else {
    const auto& r = std::get<RawMoments>(m);
    if (r.degree < 0) throw InvalidArgument("moments: negative degree");
    MultiIndexSet basis(static_cast<int>(c.size()), r.degree);
    for (const auto& alpha : basis) {
      auto it = r.values.find(alpha);
      if (it == r.values.end()) throw InvalidArgument("moments: missing entry (" + to_string(alpha) + ")");
      if (!std::isfinite(it->second)) throw InvalidArgument("moments: non-finite entry");
    }
    for (const auto& [alpha, v] : r.values) {
      if (!basis.find(alpha)) throw InvalidArgument("moments: unexpected entry (" + to_string(alpha) + ")");
    }
    if (std::abs(r.values.at(zero_index(c.size())) - 1.0) > kNormalizationTol) {
      throw InvalidArgument("moments: zero-order moment must be 1");
    }
  }
}

DiscreteTable marginalize(const DiscreteTable& t, const Context& u) {
  if (!is_subset(u, t.context)) throw InvalidArgument("marginal target is not a subset of the table's context");
  std::vector<Assignment> support;
  support.reserve(t.support.size());
  for (const auto& o : t.support) support.push_back(restrict(o, u));
  return DiscreteTable::canonical(u, std::move(support), t.probs);
}

double moment(const MeasureDesc& m, const MultiIndex& alpha) {
  const Context& c = context_of(m);
  if (alpha.size() != c.size()) throw InvalidArgument("multi-index dimension does not match the context");
  if (const auto* d = std::get_if<DiracMixture>(&m)) {
    double acc = 0.0;
    for (std::size_t i = 0; i < d->points.size(); ++i) {
      double term = d->weights[i];
      for (std::size_t j = 0; j < alpha.size(); ++j) term *= power(d->points[i][j], alpha[j]);
      acc += term;
    }
    return acc;
  }
  if (const auto* b = std::get_if<UniformBoxMixture>(&m)) {
    double acc = 0.0;
    for (std::size_t i = 0; i < b->boxes.size(); ++i) {
      double term = b->weights[i];
      for (std::size_t j = 0; j < alpha.size(); ++j) {
        term *= uniform_moment(b->boxes[i][j].lo, b->boxes[i][j].hi, alpha[j]);
      }
      acc += term;
    }
    return acc;
  }
  const auto& r = std::get<RawMoments>(m);
  if (total_degree(alpha) > r.degree) {
    throw InvalidArgument("moment (" + to_string(alpha) + ") exceeds the supplied degree " + std::to_string(r.degree));
  }
  return r.values.at(alpha);
}

DiracMixture as_dirac(const DiscreteTable& t) {
  DiracMixture d;
  d.context = t.context;
  for (const auto& o : t.support) d.points.push_back(o.values);
  d.weights = t.probs;
  return d;
}

double moment(const DiscreteTable& t, const MultiIndex& alpha) { return moment(MeasureDesc{as_dirac(t)}, alpha); }

// ---------------------------------------------------------------------------
// Binning

BinSpec BinSpec::with_index_labels(std::vector<double> cuts) {
  BinSpec b;
  b.cuts = std::move(cuts);
  for (std::size_t i = 0; i < b.cells(); ++i) b.labels.push_back(static_cast<double>(i));
  return b;
}

void BinSpec::validate() const {
  if (cuts.size() < 2) throw InvalidArgument("bins need at least two cut points");
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (!(cuts[i] < cuts[i + 1]) || !std::isfinite(cuts[i]) || !std::isfinite(cuts[i + 1])) {
      throw InvalidArgument("bin cut points must be finite and strictly increasing (no empty or overlapping cells)");
    }
  }
  if (labels.size() != cells()) throw InvalidArgument("one label per bin cell required");
  std::set<double> distinct(labels.begin(), labels.end());
  if (distinct.size() != labels.size()) throw InvalidArgument("bin labels must be distinct");
}

std::optional<std::size_t> BinSpec::cell_of(double v) const {
  if (cuts.size() < 2 || v < cuts.front() || v > cuts.back()) return std::nullopt;
  if (v == cuts.back()) return cells() - 1;
  auto it = std::upper_bound(cuts.begin(), cuts.end(), v);
  return static_cast<std::size_t>(it - cuts.begin()) - 1;
}

namespace {

DiscreteTable bin_atoms(const Context& c, const std::vector<std::vector<double>>& points,
                        const std::vector<double>& weights, const BinMap& bins) {
  std::vector<Assignment> support;
  for (const auto& p : points) {
    Assignment o;
    o.domain = c;
    for (std::size_t i = 0; i < c.size(); ++i) {
      auto it = bins.find(c[i]);
      if (it == bins.end()) {
        o.values.push_back(p[i]);
        continue;
      }
      it->second.validate();
      auto cell = it->second.cell_of(p[i]);
      if (!cell) throw InvalidArgument("atom at " + std::to_string(p[i]) + " is not covered by the bins");
      o.values.push_back(it->second.labels[*cell]);
    }
    support.push_back(std::move(o));
  }
  return DiscreteTable::canonical(c, std::move(support), weights);
}

}  // namespace

DiscreteTable bin(const MeasureDesc& m, const BinMap& bins) {
  if (const auto* d = std::get_if<DiracMixture>(&m)) return bin_atoms(d->context, d->points, d->weights, bins);
  if (std::holds_alternative<RawMoments>(m)) throw InvalidArgument("a measure given only by moments cannot be binned");

  const auto& b = std::get<UniformBoxMixture>(m);
  const Context& c = b.context;
  std::vector<const BinSpec*> specs;
  for (auto x : c) {
    specs.push_back(&require_bins(bins, x));
    specs.back()->validate();
  }
  std::vector<Assignment> support;
  std::vector<double> probs;
  for (std::size_t n = 0; n < b.boxes.size(); ++n) {
    const auto& box = b.boxes[n];
    // per coordinate: (label, fraction of the side inside the cell)
    std::vector<std::vector<std::pair<double, double>>> parts(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
      const BinSpec& s = *specs[i];
      const double width = box[i].hi - box[i].lo;
      double covered = 0.0;
      for (std::size_t j = 0; j < s.cells(); ++j) {
        double len = overlap(box[i].lo, box[i].hi, s.cuts[j], s.cuts[j + 1]);
        covered += len;
        if (len > 0.0) parts[i].emplace_back(s.labels[j], len / width);
      }
      if (covered < width * (1.0 - 1e-12)) throw InvalidArgument("box side is not covered by the bins");
    }
    std::vector<std::size_t> idx(c.size(), 0);
    while (true) {
      Assignment o;
      o.domain = c;
      double p = b.weights[n];
      for (std::size_t i = 0; i < c.size(); ++i) {
        o.values.push_back(parts[i][idx[i]].first);
        p *= parts[i][idx[i]].second;
      }
      support.push_back(std::move(o));
      probs.push_back(p);
      std::size_t i = c.size();
      while (i-- > 0) {
        if (++idx[i] < parts[i].size()) break;
        idx[i] = 0;
      }
      if (i == static_cast<std::size_t>(-1)) break;
    }
  }
  return DiscreteTable::canonical(c, std::move(support), std::move(probs));
}

DiscreteTable bin(const DiscreteTable& t, const BinMap& bins) {
  std::vector<std::vector<double>> points;
  for (const auto& o : t.support) points.push_back(o.values);
  return bin_atoms(t.context, points, t.probs, bins);
}

}  // namespace cfrac
