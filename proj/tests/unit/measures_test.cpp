#include <doctest.h>

#include <cmath>

#include "cfrac/catalog.hpp"
#include "cfrac/measures.hpp"

using namespace cfrac;

namespace {

MeasurementScenario interval_pair() {
  ScenarioSpec spec;
  spec.measurements = {"x", "y"};
  spec.contexts = {{"x", "y"}};
  spec.outcomes = {{"x", OutcomeSpace::interval(-1, 1)}, {"y", OutcomeSpace::interval(-1, 1)}};
  return MeasurementScenario::build(spec);
}

DiscreteTable uniform_pair() {
  const auto s = chsh_scenario();
  std::vector<Assignment> support;
  for (const auto& o : enumerate_assignments(s, s.context(0))) support.push_back(o);
  return DiscreteTable::canonical(s.context(0), support, {0.25, 0.25, 0.25, 0.25});
}

}  // namespace

TEST_CASE("marginalisation") {
  const auto t = uniform_pair();
  const auto m = marginalize(t, {0});
  REQUIRE(m.support.size() == 2);
  CHECK(m.probs[0] == doctest::Approx(0.5));
  CHECK(m.probs[1] == doctest::Approx(0.5));
  CHECK(marginalize(t, t.context) == t);
  CHECK_THROWS_AS(marginalize(t, {1}), InvalidArgument);

  const auto pr = pr_box();
  const auto b = marginalize(pr.table(3), {3});
  CHECK(b.prob(Assignment{{3}, {1}}) == doctest::Approx(0.5));
  CHECK(b.prob(Assignment{{3}, {-1}}) == doctest::Approx(0.5));

  // marginalising in two steps agrees with one step
  const auto tsirelson = tsirelson_box().table(1);
  const Context second{tsirelson.context[1]};
  CHECK(marginalize(marginalize(tsirelson, tsirelson.context), second) == marginalize(tsirelson, second));
}

TEST_CASE("table validation") {
  const auto s = chsh_scenario();
  auto t = uniform_pair();
  CHECK_NOTHROW(validate(t, s));
  t.probs[0] = 0.3;
  CHECK_THROWS_AS(validate(t, s), InvalidArgument);
  auto bad = uniform_pair();
  bad.support[0].values[0] = 0.5;
  CHECK_THROWS_AS(validate(bad, s), InvalidArgument);
}

TEST_CASE("closed-form moments") {
  const MeasureDesc dirac = DiracMixture{{0}, {{0.5}}, {1.0}};
  CHECK(moment(dirac, {3}) == doctest::Approx(0.125));
  const MeasureDesc uni = UniformBoxMixture{{0}, {{Interval{-1, 1}}}, {1.0}};
  CHECK(moment(uni, {2}) == doctest::Approx(1.0 / 3));
  CHECK(moment(uni, {1}) == doctest::Approx(0.0));
  const MeasureDesc pair = DiracMixture{{0, 1}, {{1, 1}, {-1, -1}}, {0.5, 0.5}};
  CHECK(moment(pair, {1, 1}) == doctest::Approx(1.0));
  CHECK(moment(pair, {0, 0}) == 1.0);
  CHECK(moment(uni, {0}) == 1.0);

  RawMoments raw{{0}, 2, {{{0}, 1.0}, {{1}, 0.0}, {{2}, 0.5}}};
  CHECK(moment(MeasureDesc{raw}, {2}) == 0.5);
  CHECK_THROWS_AS(moment(MeasureDesc{raw}, {3}), InvalidArgument);
}

TEST_CASE("measure validation") {
  const auto s = interval_pair();
  CHECK_NOTHROW(validate(MeasureDesc{DiracMixture{{0, 1}, {{0.5, -0.5}}, {1.0}}}, s));
  CHECK_THROWS_AS(validate(MeasureDesc{DiracMixture{{0, 1}, {{2.0, 0.0}}, {1.0}}}, s), InvalidArgument);
  CHECK_THROWS_AS(validate(MeasureDesc{DiracMixture{{0, 1}, {{0.0, 0.0}}, {0.9}}}, s), InvalidArgument);
  CHECK_THROWS_AS(
      validate(MeasureDesc{UniformBoxMixture{{0, 1}, {{Interval{-2, 0}, Interval{0, 1}}}, {1.0}}}, s),
      InvalidArgument);
  RawMoments missing{{0, 1}, 1, {{{0, 0}, 1.0}, {{1, 0}, 0.0}}};
  CHECK_THROWS_AS(validate(MeasureDesc{missing}, s), InvalidArgument);
  RawMoments unnormalised{{0, 1}, 1, {{{0, 0}, 0.5}, {{1, 0}, 0.0}, {{0, 1}, 0.0}}};
  CHECK_THROWS_AS(validate(MeasureDesc{unnormalised}, s), InvalidArgument);
}

TEST_CASE("binning") {
  BinMap sign{{0, BinSpec{{-1, 0, 1}, {-1, 1}}}, {1, BinSpec{{-1, 0, 1}, {-1, 1}}}};
  const MeasureDesc corners = DiracMixture{{0, 1}, {{1, 1}, {-1, -1}, {1, -1}}, {0.5, 0.25, 0.25}};
  const auto t = bin(corners, sign);
  CHECK(t.prob(Assignment{{0, 1}, {1, 1}}) == doctest::Approx(0.5));
  CHECK(t.prob(Assignment{{0, 1}, {-1, -1}}) == doctest::Approx(0.25));
  CHECK(t.support.size() <= 3);
  CHECK(t.total() == doctest::Approx(1.0).epsilon(1e-12));

  BinMap one{{0, BinSpec{{-1, 0, 1}, {-1, 1}}}};
  const auto u = bin(MeasureDesc{UniformBoxMixture{{0}, {{Interval{-1, 1}}}, {1.0}}}, one);
  CHECK(u.probs == std::vector<double>{0.5, 0.5});

  // the boundary value 0 falls in the upper cell, the last cell is closed
  const auto edge = bin(MeasureDesc{DiracMixture{{0}, {{0.0}, {1.0}}, {0.5, 0.5}}}, one);
  CHECK(edge.prob(Assignment{{0}, {1}}) == doctest::Approx(1.0));

  // relabelling a table is a bijection
  const auto pr = pr_box().table(0);
  BinMap flip{{0, BinSpec{{-1.5, 0, 1.5}, {1, -1}}}};
  const auto flipped = bin(pr, flip);
  CHECK(flipped.prob(Assignment{{0, 2}, {1, -1}}) == doctest::Approx(0.5));

  CHECK_THROWS_AS(BinSpec({{0, 0, 1}, {1, 2}}).validate(), InvalidArgument);
  BinMap gap{{0, BinSpec{{-1, 0.5}, {0}}}};
  CHECK_THROWS_AS(bin(MeasureDesc{DiracMixture{{0}, {{0.9}}, {1.0}}}, gap), InvalidArgument);
}
