#include <doctest.h>

#include <cmath>
#include <sstream>

#include "cfrac/catalog.hpp"
#include "cfrac/sdp_hierarchy.hpp"
#include "cfrac/solvers/dump.hpp"
#include "cfrac/solvers/psd.hpp"
#include "support/oracles.hpp"

using namespace cfrac;

TEST_CASE("SDP solver on small problems") {
  SUBCASE("two scalar constraints") {
    LmiBuilder b(1);
    const int upper = b.add_block(1);
    b.add_constant(upper, 0, 0, 1.0);
    b.add_term(0, upper, 0, 0, -1.0);
    const int lower = b.add_block(1);
    b.add_term(0, lower, 0, 0, 1.0);
    b.set_objective(0, 1.0);
    const auto s = solve_sdp(b.build());
    CHECK(s.status == SolveStatus::Optimal);
    CHECK(s.dual_value == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(s.relative_gap <= 1e-7);
  }
  SUBCASE("2x2 eigenvalue boundary") {
    LmiBuilder b(1);
    const int blk = b.add_block(2);
    b.add_constant(blk, 0, 0, 1.0);
    b.add_constant(blk, 1, 1, 1.0);
    b.add_term(0, blk, 0, 1, 1.0);
    b.set_objective(0, 1.0);
    const auto p = b.build();
    const auto s = solve_sdp(p);
    CHECK(s.status == SolveStatus::Optimal);
    CHECK(s.dual_value == doctest::Approx(1.0).epsilon(1e-6));
    for (const auto& x : s.x) CHECK(psd_check(x, 1e-7).psd);
    for (const auto& z : s.z) CHECK(psd_check(z, 1e-7).psd);

    std::ostringstream os;
    write_sdpa_sparse(os, p);
    CHECK(os.str().find("1 = mDIM") != std::string::npos);
    std::ostringstream blocks;
    write_sdp_blocks(blocks, p);
    CHECK_FALSE(blocks.str().empty());
  }
  SUBCASE("infeasible") {
    LmiBuilder b(1);
    const int blk = b.add_block(1);
    b.add_constant(blk, 0, 0, -1.0);
    b.set_objective(0, 1.0);
    b.add_term(0, blk, 0, 0, 0.0);
    const auto s = solve_sdp(b.build());
    CHECK(s.status != SolveStatus::Optimal);
  }
  SUBCASE("deterministic") {
    const auto p = assemble_sp(dirac_embedding(tsirelson_box()), 1);
    const auto a = solve_sdp(p);
    const auto b = solve_sdp(p);
    CHECK(a.iterations == b.iterations);
    CHECK(a.dual_value == b.dual_value);
  }
}

TEST_CASE("hierarchy layout") {
  const auto s = chsh_scenario(true);
  const auto l = hierarchy_layout(s, 1);
  CHECK(l.block_sizes == std::vector<int>{3, 3, 3, 3, 5, 1, 1, 1, 1});
  CHECK(l.num_moments == 15);
  CHECK(l.global_block() == 4);
  CHECK(l.localising_block(2) == 7);
  const auto l3 = hierarchy_layout(s, 3);
  CHECK(l3.block_sizes[0] == 10);
  CHECK(l3.block_sizes[4] == 35);
  CHECK(l3.block_sizes[5] == 15);
  CHECK(l3.num_moments == basis_size(4, 6));
  CHECK_THROWS_AS(hierarchy_layout(s, 0), InvalidArgument);

  const auto sp = assemble_sp(uniform_box_product(), 1);
  CHECK(sp.block_sizes == l.block_sizes);
  CHECK(sp.num_constraints() == 15);
  const auto sd = assemble_sd(uniform_box_product(), 1);
  CHECK(sd.block_sizes == l.block_sizes);
  CHECK(sd.b(0) == 1.0);

  CHECK_THROWS_AS(HierarchyConfig({3, 1}).validate(), InvalidArgument);
  CHECK_THROWS_AS(HierarchyConfig({0, 1}).validate(), InvalidArgument);
}

TEST_CASE("hierarchy on standard models") {
  HierarchyConfig cfg;
  cfg.k_max = 2;
  cfg.solve_dual = true;

  const auto uni = run_hierarchy(uniform_box_product(), cfg);
  for (const auto& b : uni.bounds) {
    CHECK(b.status == SolveStatus::Optimal);
    CHECK(std::abs(b.value - 1.0) <= 1e-6);
    REQUIRE(b.dual_value);
    CHECK(std::abs(*b.dual_value - 1.0) <= 1e-6);
  }

  const auto pr = run_hierarchy(dirac_embedding(pr_box()), cfg);
  CHECK(pr.monotone);
  CHECK(pr.weak_duality_ok);
  for (const auto& b : pr.bounds) {
    CHECK(b.value >= -1e-7);
    CHECK(b.value <= 1 + 1e-9);
    CHECK(*b.dual_value >= b.value - 1e-6);
  }
  CHECK(pr.bounds.back().value <= 1e-6);
  CHECK(pr.cf_lower == doctest::Approx(1 - pr.ncf_upper));
  CHECK(pr.cf_lower <= 1.0);

  const auto noise = run_hierarchy(dirac_embedding(uniform_noise_box()), cfg);
  for (const auto& b : noise.bounds) CHECK(std::abs(b.value - 1.0) <= 1e-6);
}

TEST_CASE("single-context noncontextual model reaches 1") {
  ScenarioSpec spec;
  spec.measurements = {"x", "y"};
  spec.contexts = {{"x", "y"}};
  spec.outcomes = {{"x", OutcomeSpace::interval(-1, 1)}, {"y", OutcomeSpace::interval(0, 1)}};
  const auto s = MeasurementScenario::build(spec);
  const EmpiricalModel e(s, {MeasureDesc{DiracMixture{{0, 1}, {{0.5, 0.25}, {-1, 1}}, {0.4, 0.6}}}});
  HierarchyConfig cfg;
  cfg.k_max = 2;
  for (const auto& b : run_hierarchy(e, cfg).bounds) CHECK(std::abs(b.value - 1.0) <= 1e-6);
}

TEST_CASE("hierarchy refuses what it cannot bound") {
  HierarchyConfig cfg;
  cfg.k_max = 1;
  auto data = dirac_embedding(pr_box()).data();
  auto m = std::get<DiracMixture>(std::get<MeasureDesc>(data[0]));
  m.points[0] = {0.5, 0.5};
  data[0] = MeasureDesc{m};
  const EmpiricalModel signalling(chsh_scenario(true), data);
  CHECK_THROWS_AS(run_hierarchy(signalling, cfg), InvalidArgument);

  const auto big = product(pr_box(), product(pr_box(), uniform_noise_box(), "p", "q"), "r", "");
  CHECK(big.scenario().size() == 12);
  CHECK_THROWS_AS(run_hierarchy(big, cfg), InvalidArgument);
}

TEST_CASE("SP_k bounds the exact NCF of Dirac models from above") {
  testing::Rng rng(4);
  HierarchyConfig cfg;
  cfg.k_max = 2;
  for (int trial = 0; trial < 4; ++trial) {
    const auto e = testing::random_dirac_chsh_model(rng);
    const double exact = testing::grid_ncf(e);
    const auto r = run_hierarchy(e, cfg);
    for (const auto& b : r.bounds) CHECK(b.value >= exact - 1e-6);
    CHECK(r.monotone);
  }
}
