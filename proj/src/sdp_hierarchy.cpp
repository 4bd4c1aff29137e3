#include "cfrac/sdp_hierarchy.hpp"

#include <chrono>
#include <future>

#include "cfrac/error.hpp"

namespace cfrac {

void HierarchyConfig::validate() const {
  if (k_min < 1) throw InvalidArgument("hierarchy: k_min must be at least 1 (box constraints have degree 2)");
  if (k_max < k_min) throw InvalidArgument("hierarchy: k_max is below k_min");
}

std::vector<VariableBox> variable_boxes(const MeasurementScenario& s) {
  std::vector<VariableBox> boxes;
  for (const auto& o : s.outcome_spaces()) boxes.push_back({o.min(), o.max()});
  return boxes;
}

int HierarchyLayout::global_block() const { return static_cast<int>(block_sizes.size()) - d - 1; }
int HierarchyLayout::localising_block(int j) const { return global_block() + 1 + j; }

HierarchyLayout hierarchy_layout(const MeasurementScenario& s, int k) {
  if (k < 1) throw InvalidArgument("hierarchy level must be at least 1");
  const int d = static_cast<int>(s.size());
  if (d > kMaxHierarchyDim) {
    throw InvalidArgument("hierarchy supports at most " + std::to_string(kMaxHierarchyDim) + " measurements");
  }
  HierarchyLayout l;
  l.d = d;
  l.k = k;
  for (const auto& c : s.contexts()) l.block_sizes.push_back(static_cast<int>(basis_size(static_cast<int>(c.size()), k)));
  l.block_sizes.push_back(static_cast<int>(basis_size(d, k)));
  for (int j = 0; j < d; ++j) l.block_sizes.push_back(static_cast<int>(basis_size(d, k - 1)));
  l.num_moments = basis_size(d, 2 * k);
  return l;
}

namespace {

MultiIndex embed(const MultiIndex& alpha, const Context& c, int d) {
  MultiIndex g = zero_index(static_cast<std::size_t>(d));
  for (std::size_t i = 0; i < c.size(); ++i) g[c[i]] = alpha[i];
  return g;
}

std::vector<MomentSequence> data_moments(const EmpiricalModel& e, int k) {
  std::vector<MomentSequence> out;
  for (const auto& d : e.data()) out.push_back(context_moments(d, 2 * k));
  return out;
}

// Calls f(block, row, col, moment index, coefficient) for every term of the
// matrix-valued map y -> [M_k(y^{e,C} - y|C)]_C (+) M_k(y) (+) [M_{k-1}(p_j y)]_j
// and g(block, row, col, value) for its constant part. Only row <= col.
template <class Term, class Constant>
void for_each_entry(const EmpiricalModel& e, const HierarchyLayout& l, Term f, Constant g) {
  const auto& s = e.scenario();
  const MultiIndexSet all(l.d, 2 * l.k);
  const auto ye = data_moments(e, l.k);
  for (std::size_t ci = 0; ci < s.contexts().size(); ++ci) {
    const auto& c = s.context(ci);
    const MultiIndexSet rows(static_cast<int>(c.size()), l.k);
    const int block = static_cast<int>(ci);
    for (std::size_t a = 0; a < rows.size(); ++a) {
      for (std::size_t b = a; b < rows.size(); ++b) {
        const MultiIndex ab = add(rows[a], rows[b]);
        g(block, static_cast<int>(a), static_cast<int>(b), ye[ci].at(ab));
        f(block, static_cast<int>(a), static_cast<int>(b), all.index_of(embed(ab, c, l.d)), -1.0);
      }
    }
  }
  {
    const MultiIndexSet rows(l.d, l.k);
    for (std::size_t a = 0; a < rows.size(); ++a) {
      for (std::size_t b = a; b < rows.size(); ++b) {
        f(l.global_block(), static_cast<int>(a), static_cast<int>(b), all.index_of(add(rows[a], rows[b])), 1.0);
      }
    }
  }
  const auto boxes = variable_boxes(s);
  const MultiIndexSet rows(l.d, l.k - 1);
  for (int j = 0; j < l.d; ++j) {
    const Polynomial p = box_polynomial(l.d, j, boxes[static_cast<std::size_t>(j)].lo, boxes[static_cast<std::size_t>(j)].hi);
    for (std::size_t a = 0; a < rows.size(); ++a) {
      for (std::size_t b = a; b < rows.size(); ++b) {
        const MultiIndex ab = add(rows[a], rows[b]);
        for (const auto& [delta, coeff] : p.coeffs) {
          f(l.localising_block(j), static_cast<int>(a), static_cast<int>(b), all.index_of(add(ab, delta)), coeff);
        }
      }
    }
  }
}

}  // namespace

SdpProblem assemble_sp(const EmpiricalModel& e, int k) {
  const HierarchyLayout l = hierarchy_layout(e.scenario(), k);
  LmiBuilder lmi(static_cast<int>(l.num_moments));
  for (int size : l.block_sizes) lmi.add_block(size);
  lmi.set_objective(0, 1.0);
  for_each_entry(
      e, l,
      [&](int block, int row, int col, std::size_t var, double v) { lmi.add_term(static_cast<int>(var), block, row, col, v); },
      [&](int block, int row, int col, double v) { lmi.add_constant(block, row, col, v); });
  return lmi.build();
}

SdpProblem assemble_sd(const EmpiricalModel& e, int k) {
  const auto& s = e.scenario();
  const HierarchyLayout l = hierarchy_layout(s, k);
  const MultiIndexSet all(l.d, 2 * k);
  SdpProblem p;
  p.block_sizes = l.block_sizes;
  p.a.resize(l.num_moments);
  p.b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(l.num_moments));
  p.b(0) = 1.0;  // the constant term: sum_C f_C - 1 - sigma_0 - sum_j p_j sigma_j = 0

  auto put = [&](SparseSymMatrix& m, int block, int row, int col, double v) {
    if (v != 0.0) m.push_back({block, row, col, v});
  };

  // Objective: integrate each f_C = z_C^T Q_C z_C against e_C.
  const auto ye = data_moments(e, k);
  for (std::size_t ci = 0; ci < s.contexts().size(); ++ci) {
    const auto& c = s.context(ci);
    const MultiIndexSet rows(static_cast<int>(c.size()), k);
    for (std::size_t a = 0; a < rows.size(); ++a) {
      for (std::size_t b = a; b < rows.size(); ++b) {
        const MultiIndex ab = add(rows[a], rows[b]);
        const int block = static_cast<int>(ci);
        put(p.c, block, static_cast<int>(a), static_cast<int>(b), ye[ci].at(ab));
        // Coefficient of x^gamma in z_C^T Q_C z_C.
        put(p.a[all.index_of(embed(ab, c, l.d))], block, static_cast<int>(a), static_cast<int>(b), 1.0);
      }
    }
  }
  // ... minus sigma_0 = z^T S_0 z ...
  const MultiIndexSet grows(l.d, k);
  for (std::size_t a = 0; a < grows.size(); ++a) {
    for (std::size_t b = a; b < grows.size(); ++b) {
      put(p.a[all.index_of(add(grows[a], grows[b]))], l.global_block(), static_cast<int>(a), static_cast<int>(b), -1.0);
    }
  }
  // ... minus p_j sigma_j.
  const auto boxes = variable_boxes(s);
  const MultiIndexSet lrows(l.d, k - 1);
  for (int j = 0; j < l.d; ++j) {
    const Polynomial pj = box_polynomial(l.d, j, boxes[static_cast<std::size_t>(j)].lo, boxes[static_cast<std::size_t>(j)].hi);
    for (std::size_t a = 0; a < lrows.size(); ++a) {
      for (std::size_t b = a; b < lrows.size(); ++b) {
        const MultiIndex ab = add(lrows[a], lrows[b]);
        for (const auto& [delta, coeff] : pj.coeffs) {
          put(p.a[all.index_of(add(ab, delta))], l.localising_block(j), static_cast<int>(a), static_cast<int>(b), -coeff);
        }
      }
    }
  }
  return p;
}

namespace {

LevelBound solve_level(const EmpiricalModel& e, int k, const HierarchyConfig& cfg) {
  LevelBound lb;
  lb.k = k;
  const auto t0 = std::chrono::steady_clock::now();
  const SdpSolution sp = solve_sdp(assemble_sp(e, k), cfg.solver);
  lb.value = sp.dual_value;
  lb.status = sp.status;
  lb.iterations = sp.iterations;
  if (cfg.solve_dual) {
    const SdpSolution sd = solve_sdp(assemble_sd(e, k), cfg.solver);
    lb.dual_value = sd.primal_value;
    lb.dual_status = sd.status;
  }
  lb.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return lb;
}

}  // namespace

HierarchyResult run_hierarchy(const EmpiricalModel& e, const HierarchyConfig& cfg) {
  cfg.validate();
  hierarchy_layout(e.scenario(), cfg.k_min);  // dimension check
  const auto report = check_compatibility(e, cfg.compatibility_tol, cfg.compatibility_degree);
  if (!report.compatible) throw InvalidArgument("model is not compatible: " + report.detail);

  HierarchyResult r;
  if (cfg.parallel) {
    std::vector<std::future<LevelBound>> jobs;
    for (int k = cfg.k_min; k <= cfg.k_max; ++k) {
      jobs.push_back(std::async(std::launch::async, [&e, &cfg, k] { return solve_level(e, k, cfg); }));
    }
    for (auto& j : jobs) r.bounds.push_back(j.get());
  } else {
    for (int k = cfg.k_min; k <= cfg.k_max; ++k) r.bounds.push_back(solve_level(e, k, cfg));
  }

  bool any = false;
  for (std::size_t i = 0; i < r.bounds.size(); ++i) {
    const auto& b = r.bounds[i];
    if (b.status == SolveStatus::Optimal) {
      r.ncf_upper = any ? std::min(r.ncf_upper, b.value) : b.value;
      any = true;
    }
    if (i > 0 && b.value > r.bounds[i - 1].value + 1e-6) r.monotone = false;
    if (b.dual_value && b.value > *b.dual_value + 1e-6) r.weak_duality_ok = false;
  }
  if (!any) r.ncf_upper = 1.0;
  r.cf_lower = 1.0 - r.ncf_upper;
  return r;
}

}  // namespace cfrac
