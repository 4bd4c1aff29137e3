#include "cfrac/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace cfrac {

const Context& context_of(const ContextData& d) {
  if (const auto* t = std::get_if<DiscreteTable>(&d)) return t->context;
  return context_of(std::get<MeasureDesc>(d));
}

EmpiricalModel::EmpiricalModel(MeasurementScenario scenario, std::vector<ContextData> data)
    : scenario_(std::move(scenario)), data_(std::move(data)) {
  if (data_.size() != scenario_.contexts().size()) {
    throw InvalidArgument("empirical model needs exactly one entry per maximal context");
  }
  for (std::size_t i = 0; i < data_.size(); ++i) {
    const Context& c = scenario_.context(i);
    if (context_of(data_[i]) != c) {
      throw InvalidArgument("entry #" + std::to_string(i) + " is not defined on " + scenario_.describe(c));
    }
    if (const auto* t = std::get_if<DiscreteTable>(&data_[i])) {
      for (auto x : c) {
        if (!scenario_.outcome_space(x).is_finite()) {
          throw InvalidArgument("table given for " + scenario_.describe(c) + ", which has a continuous outcome space");
        }
      }
      validate(*t, scenario_);
    } else {
      validate(std::get<MeasureDesc>(data_[i]), scenario_);
    }
  }
}

bool EmpiricalModel::is_discrete() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](const ContextData& d) { return std::holds_alternative<DiscreteTable>(d); });
}

const DiscreteTable& EmpiricalModel::table(std::size_t context) const {
  const auto* t = std::get_if<DiscreteTable>(&data_.at(context));
  if (!t) throw InvalidArgument("context " + scenario_.describe(scenario_.context(context)) + " has no finite table");
  return *t;
}

// ---------------------------------------------------------------------------
// Compatibility

namespace {

std::optional<DiscreteTable> atomic_table(const ContextData& d) {
  if (const auto* t = std::get_if<DiscreteTable>(&d)) return *t;
  const auto& m = std::get<MeasureDesc>(d);
  if (const auto* dm = std::get_if<DiracMixture>(&m)) {
    std::vector<Assignment> support;
    for (const auto& p : dm->points) support.push_back(Assignment{dm->context, p});
    return DiscreteTable::canonical(dm->context, std::move(support), dm->weights);
  }
  return std::nullopt;
}

int available_degree(const ContextData& d, int requested) {
  if (const auto* m = std::get_if<MeasureDesc>(&d)) {
    if (const auto* r = std::get_if<RawMoments>(m)) return std::min(requested, r->degree);
  }
  return requested;
}

double data_moment(const ContextData& d, const MultiIndex& alpha) {
  if (const auto* t = std::get_if<DiscreteTable>(&d)) return moment(*t, alpha);
  return moment(std::get<MeasureDesc>(d), alpha);
}

// Moment of the marginal on `u` (a subset of the data's context).
double marginal_moment(const ContextData& d, const Context& u, const MultiIndex& alpha_u) {
  const Context& c = context_of(d);
  MultiIndex alpha(c.size(), 0);
  for (std::size_t i = 0; i < u.size(); ++i) {
    auto pos = std::lower_bound(c.begin(), c.end(), u[i]) - c.begin();
    alpha[static_cast<std::size_t>(pos)] = alpha_u[i];
  }
  return data_moment(d, alpha);
}

double table_distance(const DiscreteTable& a, const DiscreteTable& b) {
  std::set<Assignment> keys(a.support.begin(), a.support.end());
  keys.insert(b.support.begin(), b.support.end());
  double worst = 0.0;
  for (const auto& o : keys) worst = std::max(worst, std::abs(a.prob(o) - b.prob(o)));
  return worst;
}

}  // namespace

CompatibilityReport check_compatibility(const EmpiricalModel& e, double tol, int degree) {
  const auto& s = e.scenario();
  CompatibilityReport report;
  for (std::size_t i = 0; i < s.contexts().size(); ++i) {
    for (std::size_t j = i + 1; j < s.contexts().size(); ++j) {
      Context u = context_intersection(s.context(i), s.context(j));
      if (u.empty()) continue;
      const ContextData& di = e.data(i);
      const ContextData& dj = e.data(j);
      double gap = 0.0;
      auto ti = atomic_table(di);
      auto tj = atomic_table(dj);
      if (ti && tj) {
        gap = table_distance(marginalize(*ti, u), marginalize(*tj, u));
      } else {
        int deg = available_degree(dj, available_degree(di, degree));
        for (const auto& alpha : MultiIndexSet(static_cast<int>(u.size()), deg)) {
          gap = std::max(gap, std::abs(marginal_moment(di, u, alpha) - marginal_moment(dj, u, alpha)));
        }
      }
      if (!report.worst_pair || gap > report.max_discrepancy) {
        report.max_discrepancy = gap;
        report.worst_pair = std::make_pair(i, j);
        report.overlap = u;
      }
    }
  }
  report.compatible = report.max_discrepancy <= tol;
  if (report.worst_pair) {
    std::ostringstream os;
    os << "contexts " << s.describe(s.context(report.worst_pair->first)) << " and "
       << s.describe(s.context(report.worst_pair->second)) << " differ on " << s.describe(report.overlap) << " by "
       << report.max_discrepancy;
    report.detail = os.str();
  } else {
    report.detail = "no overlapping contexts";
  }
  return report;
}

// ---------------------------------------------------------------------------
// Mixing

namespace {

DiracMixture canonical_dirac(Context c, const std::vector<std::vector<double>>& points,
                             const std::vector<double>& weights) {
  std::map<std::vector<double>, double> acc;
  std::vector<std::vector<double>> order;
  for (std::size_t i = 0; i < points.size(); ++i) {
    auto [it, inserted] = acc.try_emplace(points[i], 0.0);
    if (inserted) order.push_back(points[i]);
    it->second += weights[i];
  }
  DiracMixture d;
  d.context = std::move(c);
  for (const auto& p : order) {
    if (acc[p] == 0.0) continue;
    d.points.push_back(p);
    d.weights.push_back(acc[p]);
  }
  return d;
}

std::vector<double> scaled(const std::vector<double>& w, double f) {
  std::vector<double> out(w);
  for (double& x : out) x *= f;
  return out;
}

template <typename T>
std::vector<T> concat(const std::vector<T>& a, const std::vector<T>& b) {
  std::vector<T> out(a);
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

ContextData mix_entry(const ContextData& a, const ContextData& b, double lambda) {
  if (const auto* ta = std::get_if<DiscreteTable>(&a)) {
    const auto* tb = std::get_if<DiscreteTable>(&b);
    if (!tb) throw InvalidArgument("mix: data kinds differ in a context");
    return DiscreteTable::canonical(ta->context, concat(ta->support, tb->support),
                                    concat(scaled(ta->probs, lambda), scaled(tb->probs, 1.0 - lambda)));
  }
  const auto* mb = std::get_if<MeasureDesc>(&b);
  if (!mb || std::get<MeasureDesc>(a).index() != mb->index()) throw InvalidArgument("mix: data kinds differ in a context");
  const auto& ma = std::get<MeasureDesc>(a);
  if (const auto* da = std::get_if<DiracMixture>(&ma)) {
    const auto& db = std::get<DiracMixture>(*mb);
    return MeasureDesc{canonical_dirac(da->context, concat(da->points, db.points),
                                       concat(scaled(da->weights, lambda), scaled(db.weights, 1.0 - lambda)))};
  }
  if (const auto* ba = std::get_if<UniformBoxMixture>(&ma)) {
    const auto& bb = std::get<UniformBoxMixture>(*mb);
    UniformBoxMixture out;
    out.context = ba->context;
    auto boxes = concat(ba->boxes, bb.boxes);
    auto weights = concat(scaled(ba->weights, lambda), scaled(bb.weights, 1.0 - lambda));
    for (std::size_t i = 0; i < boxes.size(); ++i) {
      if (weights[i] == 0.0) continue;
      out.boxes.push_back(boxes[i]);
      out.weights.push_back(weights[i]);
    }
    return MeasureDesc{out};
  }
  const auto& ra = std::get<RawMoments>(ma);
  const auto& rb = std::get<RawMoments>(*mb);
  RawMoments out;
  out.context = ra.context;
  out.degree = std::min(ra.degree, rb.degree);
  for (const auto& alpha : MultiIndexSet(static_cast<int>(ra.context.size()), out.degree)) {
    out.values[alpha] = lambda * ra.values.at(alpha) + (1.0 - lambda) * rb.values.at(alpha);
  }
  return MeasureDesc{out};
}

}  // namespace

EmpiricalModel mix(const EmpiricalModel& e1, const EmpiricalModel& e2, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw InvalidArgument("mix: lambda must lie in [0, 1]");
  if (!(e1.scenario() == e2.scenario())) throw InvalidArgument("mix: models live on different scenarios");
  if (lambda == 0.0) return e2;
  if (lambda == 1.0) return e1;
  std::vector<ContextData> data;
  for (std::size_t i = 0; i < e1.data().size(); ++i) data.push_back(mix_entry(e1.data(i), e2.data(i), lambda));
  return EmpiricalModel(e1.scenario(), std::move(data));
}

// ---------------------------------------------------------------------------
// Product

MeasurementScenario product(const MeasurementScenario& s1, const MeasurementScenario& s2, const std::string& prefix1,
                            const std::string& prefix2) {
  ScenarioSpec spec;
  const ScenarioSpec a = s1.spec();
  const ScenarioSpec b = s2.spec();
  for (const auto& m : a.measurements) spec.measurements.push_back(prefix1 + m);
  for (const auto& m : b.measurements) spec.measurements.push_back(prefix2 + m);
  std::set<std::string> names(spec.measurements.begin(), spec.measurements.end());
  if (names.size() != spec.measurements.size()) {
    throw InvalidArgument("product: measurement labels collide; give distinct prefixes");
  }
  for (const auto& [m, o] : a.outcomes) spec.outcomes.emplace(prefix1 + m, o);
  for (const auto& [m, o] : b.outcomes) spec.outcomes.emplace(prefix2 + m, o);
  for (const auto& c1 : a.contexts) {
    for (const auto& c2 : b.contexts) {
      std::vector<std::string> c;
      for (const auto& m : c1) c.push_back(prefix1 + m);
      for (const auto& m : c2) c.push_back(prefix2 + m);
      spec.contexts.push_back(std::move(c));
    }
  }
  return MeasurementScenario::build(spec);
}

namespace {

Context shifted(const Context& c, std::size_t offset) {
  Context out(c);
  for (auto& x : out) x += offset;
  return out;
}

ContextData product_entry(const ContextData& a, const ContextData& b, const Context& joint, std::size_t split) {
  auto ta = atomic_table(a);
  auto tb = atomic_table(b);
  const bool tables = std::holds_alternative<DiscreteTable>(a) && std::holds_alternative<DiscreteTable>(b);
  if (ta && tb) {
    std::vector<Assignment> support;
    std::vector<double> probs;
    std::vector<std::vector<double>> points;
    for (std::size_t i = 0; i < ta->support.size(); ++i) {
      for (std::size_t j = 0; j < tb->support.size(); ++j) {
        Assignment o;
        o.domain = joint;
        o.values = concat(ta->support[i].values, tb->support[j].values);
        points.push_back(o.values);
        support.push_back(std::move(o));
        probs.push_back(ta->probs[i] * tb->probs[j]);
      }
    }
    if (tables) return DiscreteTable::canonical(joint, std::move(support), std::move(probs));
    return MeasureDesc{canonical_dirac(joint, points, probs)};
  }
  const auto* ma = std::get_if<MeasureDesc>(&a);
  const auto* mb = std::get_if<MeasureDesc>(&b);
  if (ma && mb && std::holds_alternative<UniformBoxMixture>(*ma) && std::holds_alternative<UniformBoxMixture>(*mb)) {
    const auto& ba = std::get<UniformBoxMixture>(*ma);
    const auto& bb = std::get<UniformBoxMixture>(*mb);
    UniformBoxMixture out;
    out.context = joint;
    for (std::size_t i = 0; i < ba.boxes.size(); ++i) {
      for (std::size_t j = 0; j < bb.boxes.size(); ++j) {
        out.boxes.push_back(concat(ba.boxes[i], bb.boxes[j]));
        out.weights.push_back(ba.weights[i] * bb.weights[j]);
      }
    }
    return MeasureDesc{out};
  }
  // Mixed kinds: only moments of the product are representable.
  RawMoments out;
  out.context = joint;
  out.degree = available_degree(b, available_degree(a, kDefaultCompatibilityDegree));
  for (const auto& alpha : MultiIndexSet(static_cast<int>(joint.size()), out.degree)) {
    MultiIndex a1(alpha.begin(), alpha.begin() + static_cast<std::ptrdiff_t>(split));
    MultiIndex a2(alpha.begin() + static_cast<std::ptrdiff_t>(split), alpha.end());
    out.values[alpha] = data_moment(a, a1) * data_moment(b, a2);
  }
  return MeasureDesc{out};
}

ContextData with_context(ContextData d, const Context& c) {
  if (auto* t = std::get_if<DiscreteTable>(&d)) {
    t->context = c;
    for (auto& o : t->support) o.domain = c;
    return d;
  }
  std::visit([&](auto& m) { m.context = c; }, std::get<MeasureDesc>(d));
  return d;
}

}  // namespace

EmpiricalModel product(const EmpiricalModel& e1, const EmpiricalModel& e2, const std::string& prefix1,
                       const std::string& prefix2) {
  MeasurementScenario s = product(e1.scenario(), e2.scenario(), prefix1, prefix2);
  const std::size_t offset = e1.scenario().size();
  std::vector<ContextData> data;
  for (std::size_t i = 0; i < e1.data().size(); ++i) {
    for (std::size_t j = 0; j < e2.data().size(); ++j) {
      const Context& c1 = e1.scenario().context(i);
      Context c2 = shifted(e2.scenario().context(j), offset);
      Context joint = concat(c1, c2);
      data.push_back(product_entry(e1.data(i), with_context(e2.data(j), c2), joint, c1.size()));
    }
  }
  return EmpiricalModel(std::move(s), std::move(data));
}

// ---------------------------------------------------------------------------
// Outcome translations

std::optional<double> ValueMap::apply(double v) const {
  for (const auto& [from, to] : pairs) {
    if (from == v) return to;
  }
  return std::nullopt;
}

namespace {

double translate_value(const OutcomeTranslation& t, double v, const std::string& label) {
  if (const auto* m = std::get_if<ValueMap>(&t)) {
    auto r = m->apply(v);
    if (!r) throw InvalidArgument("translation of '" + label + "' is not defined at " + std::to_string(v));
    return *r;
  }
  const auto& b = std::get<BinSpec>(t);
  auto cell = b.cell_of(v);
  if (!cell) throw InvalidArgument("bins of '" + label + "' do not cover " + std::to_string(v));
  return b.labels[*cell];
}

OutcomeSpace translated_space(const OutcomeSpace& o, const OutcomeTranslation& t, const std::string& label) {
  std::set<double> image;
  if (std::holds_alternative<ValueMap>(t)) {
    if (!o.is_finite()) throw InvalidArgument("value maps need a finite outcome space ('" + label + "')");
    for (double v : o.values) image.insert(translate_value(t, v, label));
  } else {
    const auto& b = std::get<BinSpec>(t);
    b.validate();
    if (o.is_finite()) {
      for (double v : o.values) image.insert(translate_value(t, v, label));
    } else {
      if (b.cuts.front() > o.lo || b.cuts.back() < o.hi) {
        throw InvalidArgument("bins of '" + label + "' leave part of the outcome interval uncovered");
      }
      image.insert(b.labels.begin(), b.labels.end());
    }
  }
  return OutcomeSpace::finite(std::vector<double>(image.begin(), image.end()));
}

}  // namespace

EmpiricalModel translate_outcomes(const EmpiricalModel& e, const TranslationMap& t) {
  const auto& s = e.scenario();
  ScenarioSpec spec = s.spec();
  for (const auto& [x, tr] : t) {
    if (x >= s.size()) throw InvalidArgument("translation given for an unknown measurement");
    spec.outcomes[s.label(x)] = translated_space(s.outcome_space(x), tr, s.label(x));
  }
  MeasurementScenario out = MeasurementScenario::build(spec);

  auto all_finite = [&](const Context& c) {
    return std::all_of(c.begin(), c.end(), [&](std::size_t x) { return out.outcome_space(x).is_finite(); });
  };
  auto touched = [&](const Context& c) {
    return std::any_of(c.begin(), c.end(), [&](std::size_t x) { return t.count(x) > 0; });
  };
  auto map_point = [&](const Context& c, std::vector<double> p) {
    for (std::size_t i = 0; i < c.size(); ++i) {
      auto it = t.find(c[i]);
      if (it != t.end()) p[i] = translate_value(it->second, p[i], s.label(c[i]));
    }
    return p;
  };

  std::vector<ContextData> data;
  for (std::size_t i = 0; i < e.data().size(); ++i) {
    const Context& c = s.context(i);
    const ContextData& d = e.data(i);
    if (!touched(c)) {
      data.push_back(d);
      continue;
    }
    auto atoms = atomic_table(d);
    if (atoms) {
      std::vector<Assignment> support;
      std::vector<std::vector<double>> points;
      for (const auto& o : atoms->support) {
        points.push_back(map_point(c, o.values));
        support.push_back(Assignment{c, points.back()});
      }
      if (all_finite(c)) {
        data.push_back(DiscreteTable::canonical(c, std::move(support), atoms->probs));
      } else {
        data.push_back(MeasureDesc{canonical_dirac(c, points, atoms->probs)});
      }
      continue;
    }
    const auto& m = std::get<MeasureDesc>(d);
    if (std::holds_alternative<UniformBoxMixture>(m)) {
      BinMap bins;
      for (auto x : c) {
        auto it = t.find(x);
        const BinSpec* b = it == t.end() ? nullptr : std::get_if<BinSpec>(&it->second);
        if (!b) throw InvalidArgument("uniform boxes can only be translated by binning every coordinate");
        bins.emplace(x, *b);
      }
      data.push_back(bin(m, bins));
      continue;
    }
    throw InvalidArgument("a measure given only by moments cannot be pushed forward");
  }
  return EmpiricalModel(std::move(out), std::move(data));
}

EmpiricalModel bin(const EmpiricalModel& e, const BinMap& bins) {
  TranslationMap t;
  for (const auto& [x, b] : bins) t.emplace(x, b);
  return translate_outcomes(e, t);
}

}  // namespace cfrac

namespace cfrac {

std::optional<EmpiricalModel> atomic_model(const EmpiricalModel& e) {
  const auto& s = e.scenario();
  std::vector<DiscreteTable> tables;
  std::vector<std::set<double>> values(s.size());
  for (std::size_t x = 0; x < s.size(); ++x) {
    if (s.outcome_space(x).is_finite()) values[x].insert(s.outcome_space(x).values.begin(), s.outcome_space(x).values.end());
  }
  for (const auto& d : e.data()) {
    auto t = atomic_table(d);
    if (!t) return std::nullopt;
    for (const auto& o : t->support) {
      for (std::size_t i = 0; i < o.domain.size(); ++i) values[o.domain[i]].insert(o.values[i]);
    }
    tables.push_back(std::move(*t));
  }
  ScenarioSpec spec = s.spec();
  for (std::size_t x = 0; x < s.size(); ++x) {
    spec.outcomes[s.label(x)] = OutcomeSpace::finite(std::vector<double>(values[x].begin(), values[x].end()));
  }
  return EmpiricalModel(MeasurementScenario::build(spec), std::vector<ContextData>(tables.begin(), tables.end()));
}

}  // namespace cfrac
