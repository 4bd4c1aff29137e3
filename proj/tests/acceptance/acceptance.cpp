// Prints one PASS/FAIL line per acceptance criterion and exits nonzero if any
// of them fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "cfrac/catalog.hpp"
#include "cfrac/fab.hpp"
#include "cfrac/lp_cf.hpp"
#include "cfrac/moments.hpp"
#include "cfrac/sdp_hierarchy.hpp"
#include "cfrac/solvers/psd.hpp"
#include "support/oracles.hpp"

using namespace cfrac;
using testing::Rng;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double max_cell_difference(const EmpiricalModel& a, const EmpiricalModel& b) {
  double worst = 0.0;
  for (std::size_t c = 0; c < a.scenario().contexts().size(); ++c) {
    const auto& ta = a.table(c);
    const auto& tb = b.table(c);
    for (const auto& o : ta.support) worst = std::max(worst, std::abs(ta.prob(o) - tb.prob(o)));
    for (const auto& o : tb.support) worst = std::max(worst, std::abs(ta.prob(o) - tb.prob(o)));
  }
  return worst;
}

Outcome ac1() {
  const auto t0 = Clock::now();
  const auto r = ncf(pr_box());
  const double t = seconds_since(t0);
  const bool brute = testing::no_deterministic_assignment_fits(pr_box());
  return {std::abs(r.cf - 1.0) <= 1e-6 && brute && t < 1.0,
          fmt("CF=%.10f brute_force_empty=%d time=%.3fs", r.cf, int(brute), t)};
}

Outcome ac2() {
  const auto t0 = Clock::now();
  const auto e = tsirelson_box();
  const auto r = ncf(e);
  const auto b = extract_bell(e);
  const double v = normalized_violation(b, e);
  const double t = seconds_since(t0);
  const double target = std::sqrt(2.0) - 1.0;
  return {std::abs(r.cf - target) <= 1e-5 && std::abs(v - r.cf) <= 1e-5 && t < 1.0,
          fmt("CF=%.8f violation=%.8f target=%.8f time=%.3fs", r.cf, v, target, t)};
}

Outcome ac3() {
  Rng rng(301);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const auto e = i % 4 == 0 ? testing::random_local_chsh_model(rng) : testing::random_chsh_model(rng);
    const auto r = ncf(e);
    worst = std::max(worst, std::abs(r.ncf - r.dual_value));
  }
  return {worst <= 1e-7, fmt("200 models, max |primal-dual|=%.3e", worst)};
}

Outcome ac4() {
  Rng rng(401);
  const BinMap sign{{0, {{-1, 0, 1}, {-1, 1}}}, {1, {{-1, 0, 1}, {-1, 1}}}, {2, {{-1, 0, 1}, {-1, 1}}},
                    {3, {{-1, 0, 1}, {-1, 1}}}};
  double worst = -1.0;
  for (int i = 0; i < 100; ++i) {
    const auto e = testing::random_dirac_chsh_model(rng);
    const double exact_cf = 1.0 - testing::grid_ncf(e);
    const double binned_cf = ncf(bin(e, sign)).cf;
    worst = std::max(worst, binned_cf - exact_cf);
  }
  return {worst <= 1e-7, fmt("100 models, max CF(binned)-CF(exact)=%.3e", worst)};
}

Outcome ac5() {
  Rng rng(501);
  HierarchyConfig cfg;
  const auto t0 = Clock::now();
  double worst_sound = 1.0, worst_mono = -1.0;
  int non_optimal = 0;
  for (int i = 0; i < 50; ++i) {
    const auto e = testing::random_dirac_chsh_model(rng);
    const double exact = testing::grid_ncf(e);
    const auto r = run_hierarchy(e, cfg);
    for (std::size_t k = 0; k < r.bounds.size(); ++k) {
      if (r.bounds[k].status != SolveStatus::Optimal) ++non_optimal;
      worst_sound = std::min(worst_sound, r.bounds[k].value - exact);
      if (k > 0) worst_mono = std::max(worst_mono, r.bounds[k].value - r.bounds[k - 1].value);
    }
  }
  const double t = seconds_since(t0);
  return {worst_sound >= -1e-6 && worst_mono <= 1e-6 && t < 300.0,
          fmt("min(value-exact)=%.3e max(value(k+1)-value(k))=%.3e non_optimal_levels=%d time=%.1fs", worst_sound,
              worst_mono, non_optimal, t)};
}

Outcome ac6() {
  const auto r = run_hierarchy(uniform_box_product(), HierarchyConfig{});
  double worst = 0.0;
  std::string values;
  for (const auto& b : r.bounds) {
    worst = std::max(worst, std::abs(b.value - 1.0));
    values += fmt(" k%d=%.9f", b.k, b.value);
  }
  return {worst <= 1e-6 && r.bounds.size() == 3, "max|SP_k-1|=" + fmt("%.3e", worst) + values};
}

Outcome ac7() {
  Rng rng(701);
  std::vector<EmpiricalModel> models{uniform_box_product(), dirac_embedding(pr_box()),
                                     dirac_embedding(tsirelson_box()), dirac_embedding(uniform_noise_box())};
  for (int i = 0; i < 4; ++i) models.push_back(testing::random_dirac_chsh_model(rng));
  HierarchyConfig cfg;
  cfg.solve_dual = true;
  double worst = -1e300;
  int runs = 0;
  for (const auto& e : models) {
    const auto r = run_hierarchy(e, cfg);
    for (const auto& b : r.bounds) {
      if (!b.dual_value) continue;
      worst = std::max(worst, b.value - *b.dual_value);
      ++runs;
    }
  }
  return {runs == int(models.size()) * 3 && worst <= 1e-6,
          fmt("%d levels, max(SP_k-SD_k)=%.3e", runs, worst)};
}

Outcome ac8() {
  Rng rng(801);
  std::uniform_int_distribution<int> dim(1, 3);
  std::uniform_real_distribution<double> edge(-2.0, 2.0);
  double worst = 1e300;
  int matrices = 0;
  for (int i = 0; i < 1000; ++i) {
    const int d = dim(rng);
    std::vector<Interval> box;
    for (int j = 0; j < d; ++j) {
      double lo = edge(rng), hi = edge(rng);
      if (lo > hi) std::swap(lo, hi);
      box.push_back({lo, hi + 0.05});
    }
    const auto m = testing::random_measure(rng, d, box);
    const auto y = context_moments(m, 8);
    for (int k = 1; k <= 3; ++k) {
      worst = std::min(worst, psd_check(moment_matrix(y, k).m, 1e-9).min_eig);
      ++matrices;
      for (int j = 0; j < d; ++j) {
        const auto p = box_polynomial(d, j, box[std::size_t(j)].lo, box[std::size_t(j)].hi);
        worst = std::min(worst, psd_check(localising_matrix(y, p, k).m, 1e-9).min_eig);
        ++matrices;
      }
    }
  }
  return {worst >= -1e-9, fmt("%d matrices, min eigenvalue=%.3e", matrices, worst)};
}

Outcome ac9() {
  Rng rng(901);
  // (a) noncontextual models through LP witness and deterministic HV model
  std::vector<EmpiricalModel> local{uniform_noise_box()};
  for (int i = 0; i < 100; ++i) local.push_back(testing::random_local_chsh_model(rng));
  double worst_a = 0.0;
  int checked_a = 0;
  for (const auto& e : local) {
    const auto r = ncf(e);
    if (std::abs(r.ncf - 1.0) > 1e-9) continue;
    DiscreteTable mu = r.witness;
    const double mass = mu.total();
    for (auto& p : mu.probs) p /= mass;
    const auto h = global_to_deterministic_hv(mu, e.scenario());
    worst_a = std::max(worst_a, max_cell_difference(hv_to_empirical(h), e));
    ++checked_a;
  }
  // (b) rectangle formula against direct marginals
  double worst_b = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto h = testing::random_factorisable_hv(rng, 1 + i % 5);
    const auto mu = factorisable_hv_to_global(h);
    worst_b = std::max(worst_b, max_cell_difference(marginal_model(mu, h.scenario), hv_to_empirical(h)));
  }
  // (c) deterministic HV models are factorisable
  int det = 0, det_fact = 0;
  for (int i = 0; i < 100; ++i) {
    const auto e = testing::random_local_chsh_model(rng);
    DiscreteTable mu = ncf(e).witness;
    const double mass = mu.total();
    for (auto& p : mu.probs) p /= mass;
    const auto cls = classify_hv(global_to_deterministic_hv(mu, e.scenario()));
    det += cls.deterministic;
    det_fact += cls.deterministic && cls.factorisable;
  }
  const bool pass = checked_a == int(local.size()) && worst_a <= 1e-12 && worst_b <= 1e-12 && det == 100 &&
                    det_fact == 100;
  return {pass, fmt("(a) %d models max dev=%.3e; (b) max dev=%.3e; (c) %d/%d deterministic models factorisable",
                    checked_a, worst_a, worst_b, det_fact, det)};
}

Outcome ac10() {
  Rng rng(1001);
  std::uniform_int_distribution<int> size(2, 7), value(-3, 3), coin(0, 1);
  int failures = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto n = std::size_t(size(rng));
    Context all;
    for (std::size_t x = 0; x < n; ++x) all.push_back(x);
    Assignment g{all, {}};
    for (std::size_t x = 0; x < n; ++x) g.values.push_back(value(rng));
    auto subset = [&](const Context& of) {
      Context u;
      for (auto x : of) {
        if (coin(rng)) u.push_back(x);
      }
      return u;
    };
    // identity and composition
    failures += restrict(g, all) != g;
    const Context u = subset(all), v = subset(u);
    failures += restrict(restrict(g, u), v) != restrict(g, v);
    // a random cover; the sections glue back to g and nothing else
    std::vector<Context> cover;
    std::vector<bool> covered(n, false);
    while (std::find(covered.begin(), covered.end(), false) != covered.end()) {
      Context c = subset(all);
      if (c.empty()) continue;
      for (auto x : c) covered[x] = true;
      cover.push_back(c);
    }
    std::vector<Assignment> parts;
    for (const auto& c : cover) parts.push_back(restrict(g, c));
    const Assignment glued = glue(parts);
    failures += glued != g;
    for (std::size_t j = 0; j < cover.size(); ++j) failures += restrict(glued, cover[j]) != parts[j];
    Assignment other = g;
    other.values[std::size_t(value(rng) + 3) % n] += 10;
    bool differs = false;
    for (std::size_t j = 0; j < cover.size(); ++j) differs |= restrict(other, cover[j]) != parts[j];
    failures += !differs;
  }
  return {failures == 0, fmt("1000 cases, %d failures", failures)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"AC1 PR box contextual fraction", ac1},
      {"AC2 Tsirelson box and Bell violation", ac2},
      {"AC3 LP strong duality", ac3},
      {"AC4 binning monotonicity", ac4},
      {"AC5 hierarchy soundness and monotonicity", ac5},
      {"AC6 noncontextual continuous model", ac6},
      {"AC7 weak duality sandwich", ac7},
      {"AC8 moment matrix PSD property", ac8},
      {"AC9 FAB round trips", ac9},
      {"AC10 event sheaf laws", ac10},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
