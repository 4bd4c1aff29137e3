#include "cfrac/catalog.hpp"

#include <cmath>

#include "cfrac/error.hpp"

namespace cfrac {

MeasurementScenario chsh_scenario(bool continuous) {
  ScenarioSpec spec;
  spec.measurements = {"a0", "a1", "b0", "b1"};
  spec.contexts = {{"a0", "b0"}, {"a0", "b1"}, {"a1", "b0"}, {"a1", "b1"}};
  for (const auto& m : spec.measurements) {
    spec.outcomes[m] = continuous ? OutcomeSpace::interval(-1.0, 1.0) : OutcomeSpace::finite({-1.0, 1.0});
  }
  return MeasurementScenario::build(spec);
}

EmpiricalModel correlator_box(const std::array<double, 4>& correlators) {
  auto s = chsh_scenario();
  std::vector<ContextData> data;
  for (std::size_t ci = 0; ci < 4; ++ci) {
    const auto& c = s.context(ci);
    std::vector<Assignment> support;
    std::vector<double> probs;
    for (auto& o : enumerate_assignments(s, c)) {
      probs.push_back((1.0 + o.values[0] * o.values[1] * correlators[ci]) / 4.0);
      support.push_back(std::move(o));
    }
    data.emplace_back(DiscreteTable::canonical(c, std::move(support), std::move(probs)));
  }
  return EmpiricalModel(std::move(s), std::move(data));
}

EmpiricalModel pr_box() { return correlator_box({1.0, 1.0, 1.0, -1.0}); }

EmpiricalModel tsirelson_box() {
  const double r = 1.0 / std::sqrt(2.0);
  return correlator_box({r, r, r, -r});
}

EmpiricalModel uniform_noise_box() { return correlator_box({0.0, 0.0, 0.0, 0.0}); }

EmpiricalModel dirac_embedding(const EmpiricalModel& discrete) {
  if (!discrete.is_discrete()) throw InvalidArgument("dirac_embedding expects a discrete model");
  const auto& ds = discrete.scenario();
  ScenarioSpec spec = ds.spec();
  for (auto& [label, space] : spec.outcomes) space = OutcomeSpace::interval(space.min(), space.max());
  auto s = MeasurementScenario::build(spec);
  std::vector<ContextData> data;
  for (std::size_t ci = 0; ci < ds.contexts().size(); ++ci) data.emplace_back(MeasureDesc{as_dirac(discrete.table(ci))});
  return EmpiricalModel(std::move(s), std::move(data));
}

EmpiricalModel uniform_box_product() {
  auto s = chsh_scenario(true);
  std::vector<ContextData> data;
  for (const auto& c : s.contexts()) {
    data.emplace_back(MeasureDesc{UniformBoxMixture{c, {{Interval{-1.0, 1.0}, Interval{-1.0, 1.0}}}, {1.0}}});
  }
  return EmpiricalModel(std::move(s), std::move(data));
}

}  // namespace cfrac
