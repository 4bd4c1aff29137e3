#include <doctest.h>

#include "cfrac/catalog.hpp"
#include "cfrac/empirical.hpp"
#include "cfrac/lp_cf.hpp"
#include "support/oracles.hpp"

using namespace cfrac;

namespace {

EmpiricalModel perturbed_pr() {
  const auto pr = pr_box();
  auto data = pr.data();
  auto t = std::get<DiscreteTable>(data[0]);
  for (std::size_t i = 0; i < t.support.size(); ++i) {
    if (t.support[i].values == std::vector<double>{1, 1}) t.probs[i] += 0.1;
  }
  for (auto& p : t.probs) p /= 1.1;
  data[0] = t;
  return EmpiricalModel(pr.scenario(), data);
}

// Two measurements, one context, outcomes {0, 1, 2} for x.
EmpiricalModel three_outcome_model() {
  ScenarioSpec spec;
  spec.measurements = {"x", "y"};
  spec.contexts = {{"x", "y"}};
  spec.outcomes = {{"x", OutcomeSpace::finite({0, 1, 2})}, {"y", OutcomeSpace::finite({0, 1})}};
  const auto s = MeasurementScenario::build(spec);
  auto os = enumerate_assignments(s, s.context(0));
  return EmpiricalModel(s, {DiscreteTable::canonical(s.context(0), os, {0.1, 0.2, 0.3, 0.1, 0.15, 0.15})});
}

}  // namespace

TEST_CASE("compatibility check") {
  const auto pr = check_compatibility(pr_box(), 1e-12);
  CHECK(pr.compatible);
  CHECK(pr.max_discrepancy == 0.0);

  const auto bad = check_compatibility(perturbed_pr(), 1e-9);
  CHECK_FALSE(bad.compatible);
  REQUIRE(bad.worst_pair);
  CHECK(bad.worst_pair->first == 0);
  CHECK(bad.max_discrepancy > 0.01);
  CHECK_FALSE(bad.detail.empty());

  CHECK(check_compatibility(three_outcome_model(), 0.0).compatible);
  CHECK(check_compatibility(uniform_box_product(), 1e-12).compatible);
  CHECK(check_compatibility(dirac_embedding(tsirelson_box()), 1e-12).compatible);
}

TEST_CASE("mixing") {
  const auto pr = pr_box();
  const auto noise = uniform_noise_box();
  const auto m = mix(pr, noise, 0.5);
  CHECK(m.table(0).prob(Assignment{{0, 2}, {1, 1}}) == doctest::Approx(0.375));
  CHECK(mix(pr, pr, 0.3) == pr);
  CHECK(mix(pr, noise, 0.0) == noise);
  CHECK_THROWS_AS(mix(pr, noise, 1.5), InvalidArgument);
  CHECK_THROWS_AS(mix(pr, three_outcome_model(), 0.5), InvalidArgument);
  CHECK(check_compatibility(m, 1e-9).compatible);
}

TEST_CASE("products") {
  const auto pr = pr_box();
  const auto p = product(pr, pr, "L", "R");
  CHECK(p.scenario().size() == 8);
  CHECK(p.scenario().contexts().size() == 16);
  CHECK(check_compatibility(p, 1e-9).compatible);
  CHECK_THROWS(product(pr, pr));
  // marginal of a product context onto the first factor
  const auto& t = p.table(0);
  Context first(pr.scenario().context(0).begin(), pr.scenario().context(0).end());
  const auto m = marginalize(t, first);
  for (std::size_t i = 0; i < m.support.size(); ++i) {
    Assignment o{pr.scenario().context(0), m.support[i].values};
    CHECK(m.probs[i] == doctest::Approx(pr.table(0).prob(o)));
  }

  // deterministic single-context models multiply to a deterministic model
  ScenarioSpec spec;
  spec.measurements = {"x"};
  spec.contexts = {{"x"}};
  spec.outcomes = {{"x", OutcomeSpace::finite({0, 1})}};
  const auto s = MeasurementScenario::build(spec);
  const EmpiricalModel d(s, {DiscreteTable::canonical({0}, {Assignment{{0}, {1}}}, {1.0})});
  const auto dd = product(d, d, "p", "q");
  CHECK(dd.table(0).support.size() == 1);
  CHECK(dd.table(0).probs[0] == 1.0);
}

TEST_CASE("outcome translation") {
  const auto e = three_outcome_model();
  CHECK(translate_outcomes(e, {}) == e);

  ValueMap merge{{{0, 0}, {1, 1}, {2, 1}}};
  const auto m = translate_outcomes(e, {{0, merge}});
  CHECK(m.scenario().outcome_space(0).values == std::vector<double>{0, 1});
  CHECK(m.table(0).prob(Assignment{{0, 1}, {1, 0}}) == doctest::Approx(0.3 + 0.15));
  CHECK(m.table(0).prob(Assignment{{0, 1}, {1, 1}}) == doctest::Approx(0.1 + 0.15));

  ValueMap partial{{{0, 0}}};
  CHECK_THROWS_AS(translate_outcomes(e, {{0, partial}}), InvalidArgument);

  // sign-binning the embedded PR box gives back the PR box
  BinMap sign;
  for (std::size_t x = 0; x < 4; ++x) sign[x] = BinSpec{{-1, 0, 1}, {-1, 1}};
  const auto binned = bin(dirac_embedding(pr_box()), sign);
  CHECK(binned == pr_box());
  CHECK(check_compatibility(bin(uniform_box_product(), sign), 1e-12).compatible);
}

TEST_CASE("atomic models discretise onto the atom grid") {
  const auto a = atomic_model(dirac_embedding(tsirelson_box()));
  REQUIRE(a);
  CHECK(a->is_discrete());
  CHECK(*a == tsirelson_box());
  CHECK_FALSE(atomic_model(uniform_box_product()));
}

TEST_CASE("free operations do not increase contextuality") {
  testing::Rng rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const auto e1 = testing::random_chsh_model(rng);
    const auto e2 = testing::random_chsh_model(rng);
    const double cf1 = ncf(e1).cf;
    const double cf2 = ncf(e2).cf;
    const double lambda = std::uniform_real_distribution<double>(0, 1)(rng);
    CHECK(ncf(mix(e1, e2, lambda)).cf <= lambda * cf1 + (1 - lambda) * cf2 + 1e-7);

    const std::size_t x = std::uniform_int_distribution<std::size_t>(0, 3)(rng);
    const auto coarse = translate_outcomes(e1, {{x, ValueMap{{{-1, 1}, {1, 1}}}}});
    CHECK(check_compatibility(coarse, 1e-9).compatible);
    CHECK(ncf(coarse).cf <= cf1 + 1e-7);
  }
  for (int trial = 0; trial < 4; ++trial) {
    const auto e1 = testing::random_chsh_model(rng);
    const auto e2 = testing::random_chsh_model(rng);
    CHECK(ncf(product(e1, e2, "L", "R")).ncf >= ncf(e1).ncf * ncf(e2).ncf - 1e-7);
  }
}
