#include "cfrac/fab.hpp"

#include <cmath>
#include <cstdio>

#include "cfrac/error.hpp"

namespace cfrac {

namespace {

double max_table_difference(const DiscreteTable& a, const DiscreteTable& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.support.size(); ++i) d = std::max(d, std::abs(a.probs[i] - b.prob(a.support[i])));
  for (std::size_t i = 0; i < b.support.size(); ++i) d = std::max(d, std::abs(b.probs[i] - a.prob(b.support[i])));
  return d;
}

// Single-measurement marginal of lambda's kernels at x.
DiscreteTable marginal_at(const HiddenVariableModel& h, std::size_t l, std::size_t x) {
  const auto& s = h.scenario;
  for (std::size_t c = 0; c < s.contexts().size(); ++c) {
    if (is_subset({x}, s.context(c))) return marginalize(h.kernels[c][l], {x});
  }
  throw InvalidArgument("measurement outside every context");
}

bool is_product(const HiddenVariableModel& h, std::size_t c, std::size_t l) {
  const auto& s = h.scenario;
  const auto& k = h.kernels[c][l];
  std::vector<DiscreteTable> marg;
  for (std::size_t x : s.context(c)) marg.push_back(marginalize(k, {x}));
  for (const auto& o : enumerate_assignments(s, s.context(c))) {
    double prod = 1.0;
    for (std::size_t i = 0; i < marg.size(); ++i) prod *= marg[i].prob(restrict(o, marg[i].context));
    if (std::abs(prod - k.prob(o)) > kHvTol) return false;
  }
  return true;
}

}  // namespace

void HiddenVariableModel::validate() const {
  if (!scenario.all_finite()) throw InvalidArgument("hidden-variable models need finite outcome spaces");
  if (lambdas.empty()) throw InvalidArgument("no hidden variables");
  if (prior.size() != lambdas.size()) throw InvalidArgument("prior and hidden variables differ in length");
  double total = 0.0;
  for (double p : prior) {
    if (!std::isfinite(p) || p < 0.0) throw InvalidArgument("prior has a negative entry");
    total += p;
  }
  if (std::abs(total - 1.0) > kHvTol) throw InvalidArgument("prior does not sum to 1");
  if (kernels.size() != scenario.contexts().size()) throw InvalidArgument("one kernel family per maximal context expected");
  for (std::size_t c = 0; c < kernels.size(); ++c) {
    if (kernels[c].size() != lambdas.size()) throw InvalidArgument("one kernel per hidden variable expected");
    for (const auto& k : kernels[c]) {
      if (k.context != scenario.context(c)) throw InvalidArgument("kernel defined on the wrong context");
      cfrac::validate(k, scenario);
    }
  }
  for (std::size_t l = 0; l < lambdas.size(); ++l) {
    for (std::size_t c1 = 0; c1 < kernels.size(); ++c1) {
      for (std::size_t c2 = c1 + 1; c2 < kernels.size(); ++c2) {
        const Context u = context_intersection(scenario.context(c1), scenario.context(c2));
        if (u.empty()) continue;
        const double d = max_table_difference(marginalize(kernels[c1][l], u), marginalize(kernels[c2][l], u));
        if (d > kHvTol) {
          throw InvalidArgument("kernels of '" + lambdas[l] + "' disagree on " + scenario.describe(u) +
                                " (parameter independence)");
        }
      }
    }
  }
}

EmpiricalModel hv_to_empirical(const HiddenVariableModel& h) {
  h.validate();
  std::vector<ContextData> data;
  for (std::size_t c = 0; c < h.kernels.size(); ++c) {
    std::vector<Assignment> support;
    std::vector<double> probs;
    for (std::size_t l = 0; l < h.lambdas.size(); ++l) {
      const auto& k = h.kernels[c][l];
      for (std::size_t i = 0; i < k.support.size(); ++i) {
        support.push_back(k.support[i]);
        probs.push_back(h.prior[l] * k.probs[i]);
      }
    }
    data.emplace_back(DiscreteTable::canonical(h.scenario.context(c), std::move(support), std::move(probs)));
  }
  return EmpiricalModel(h.scenario, std::move(data));
}

HvClass classify_hv(const HiddenVariableModel& h) {
  HvClass r{true, true};
  for (std::size_t c = 0; c < h.kernels.size(); ++c) {
    for (std::size_t l = 0; l < h.lambdas.size(); ++l) {
      const auto& k = h.kernels[c][l];
      if (!(k.support.size() == 1 && k.probs[0] == 1.0)) r.deterministic = false;
      if (r.factorisable && !is_product(h, c, l)) r.factorisable = false;
    }
  }
  return r;
}

HiddenVariableModel global_to_deterministic_hv(const DiscreteTable& mu, const MeasurementScenario& s) {
  if (mu.context != s.all_measurements()) throw InvalidArgument("global table must live on every measurement");
  cfrac::validate(mu, s);
  HiddenVariableModel h{s, {}, {}, std::vector<std::vector<DiscreteTable>>(s.contexts().size())};
  for (std::size_t i = 0; i < mu.support.size(); ++i) {
    if (mu.probs[i] == 0.0) continue;
    const auto& g = mu.support[i];
    std::string name;
    for (std::size_t x = 0; x < g.domain.size(); ++x) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%s%s=%g", x ? "," : "", s.label(g.domain[x]).c_str(), g.values[x]);
      name += buf;
    }
    h.lambdas.push_back(name);
    h.prior.push_back(mu.probs[i]);
    for (std::size_t c = 0; c < s.contexts().size(); ++c) {
      h.kernels[c].push_back(DiscreteTable{s.context(c), {restrict(g, s.context(c))}, {1.0}});
    }
  }
  return h;
}

DiscreteTable factorisable_hv_to_global(const HiddenVariableModel& h) {
  h.validate();
  if (!classify_hv(h).factorisable) throw InvalidArgument("hidden-variable model is not factorisable");
  const auto& s = h.scenario;
  const auto globals = enumerate_global_assignments(s);
  std::vector<double> mu(globals.size(), 0.0);
  for (std::size_t l = 0; l < h.lambdas.size(); ++l) {
    std::vector<DiscreteTable> kx;
    for (std::size_t x = 0; x < s.size(); ++x) kx.push_back(marginal_at(h, l, x));
    for (std::size_t g = 0; g < globals.size(); ++g) {
      double p = h.prior[l];
      for (std::size_t x = 0; x < s.size() && p != 0.0; ++x) p *= kx[x].prob(restrict(globals[g], {x}));
      mu[g] += p;
    }
  }
  return DiscreteTable::canonical(s.all_measurements(), globals, mu);
}

EmpiricalModel marginal_model(const DiscreteTable& mu, const MeasurementScenario& s) {
  std::vector<ContextData> data;
  for (const auto& c : s.contexts()) data.emplace_back(marginalize(mu, c));
  return EmpiricalModel(s, std::move(data));
}

}  // namespace cfrac
