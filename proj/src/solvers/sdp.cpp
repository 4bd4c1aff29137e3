#include "cfrac/solvers/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "cfrac/error.hpp"

namespace cfrac {

void SdpProblem::check() const {
  if (block_sizes.empty()) throw InvalidArgument("SDP: no blocks");
  for (int s : block_sizes) {
    if (s < 1) throw InvalidArgument("SDP: block sizes must be positive");
  }
  if (b.size() != num_constraints()) throw InvalidArgument("SDP: b has wrong length");
  auto check_matrix = [&](const SparseSymMatrix& m) {
    for (const auto& e : m) {
      if (e.block < 0 || e.block >= static_cast<int>(block_sizes.size())) throw InvalidArgument("SDP: bad block index");
      const int n = block_sizes[static_cast<std::size_t>(e.block)];
      if (e.row < 0 || e.col < e.row || e.col >= n) throw InvalidArgument("SDP: entry outside the upper triangle");
      if (!std::isfinite(e.value)) throw InvalidArgument("SDP: non-finite entry");
    }
  };
  check_matrix(c);
  for (const auto& m : a) check_matrix(m);
  if (!b.allFinite()) throw InvalidArgument("SDP: non-finite b");
}

Eigen::MatrixXd dense_block(const SparseSymMatrix& m, int block, int size) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(size, size);
  for (const auto& e : m) {
    if (e.block != block) continue;
    d(e.row, e.col) += e.value;
    if (e.row != e.col) d(e.col, e.row) += e.value;
  }
  return d;
}

namespace {

// The iteration runs in extended precision: on moment relaxations of atomic
// measures the moment side has no interior point, the Gram matrices grow
// without bound near the optimum and double precision loses the primal
// residual before the gap closes.
using Real = long double;
using Mat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
using Vec = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
using Blocks = std::vector<Mat>;

struct FullEntry {
  int p;
  int q;
  Real v;
};

// Per block: the constraints touching it, with both triangles spelled out.
struct BlockIndex {
  std::vector<int> constraint;
  std::vector<std::vector<FullEntry>> entries;
};

Real inner(const Blocks& u, const Blocks& v) {
  Real s = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) s += u[k].cwiseProduct(v[k]).sum();
  return s;
}

Real frobenius(const Blocks& u) { return std::sqrt(inner(u, u)); }

Mat sym(const Mat& m) { return (m + m.transpose()) / 2; }

class InteriorPoint {
 public:
  InteriorPoint(const SdpProblem& p, const SdpOptions& opt) : p_(p), opt_(opt) {
    const int nb = static_cast<int>(p.block_sizes.size());
    m_ = p.num_constraints();
    index_.resize(static_cast<std::size_t>(nb));
    for (int i = 0; i < m_; ++i) {
      std::vector<std::vector<FullEntry>> per(static_cast<std::size_t>(nb));
      for (const auto& e : p.a[static_cast<std::size_t>(i)]) {
        per[static_cast<std::size_t>(e.block)].push_back({e.row, e.col, e.value});
        if (e.row != e.col) per[static_cast<std::size_t>(e.block)].push_back({e.col, e.row, e.value});
      }
      for (int k = 0; k < nb; ++k) {
        if (per[static_cast<std::size_t>(k)].empty()) continue;
        index_[static_cast<std::size_t>(k)].constraint.push_back(i);
        index_[static_cast<std::size_t>(k)].entries.push_back(std::move(per[static_cast<std::size_t>(k)]));
      }
    }
    for (int k = 0; k < nb; ++k) {
      c_.push_back(dense_block(p.c, k, p.block_sizes[static_cast<std::size_t>(k)]).cast<Real>());
    }
    for (int s : p.block_sizes) n_ += s;
    b_ = p.b.cast<Real>();
    norm_b_ = b_.norm();
    norm_c_ = frobenius(c_);
  }

  SdpSolution run() {
    SdpSolution best;
    double best_merit = std::numeric_limits<double>::infinity();

    init();
    int stalls = 0;
    for (int it = 0; it <= opt_.max_iterations; ++it) {
      SdpSolution cur = snapshot(it);
      const double merit = std::max({cur.relative_gap, cur.primal_infeasibility, cur.dual_infeasibility});
      if (opt_.verbose) {
        std::fprintf(stderr, "%3d  p %.10e  d %.10e  gap %.2e  pinf %.2e  dinf %.2e  mu %.2Le  |X| %.2Le\n", it,
                     cur.primal_value, cur.dual_value, cur.relative_gap, cur.primal_infeasibility,
                     cur.dual_infeasibility, inner(x_, z_) / n_, frobenius(x_));
      }
      if (merit < best_merit) {
        best_merit = merit;
        best = cur;
      }
      if (cur.relative_gap <= opt_.tol && cur.primal_infeasibility <= opt_.tol && cur.dual_infeasibility <= opt_.tol) {
        cur.status = SolveStatus::Optimal;
        return cur;
      }
      if (it == opt_.max_iterations) break;

      const Real big = 1e12;
      if (frobenius(x_) > big * (1 + norm_b_)) {
        best.status = SolveStatus::Infeasible;
        return best;
      }
      if (y_.norm() > big && b_.dot(y_) > 0) {
        best.status = SolveStatus::Unbounded;
        return best;
      }

      Real step = 0.0;
      if (!iterate(step)) {
        best.status = SolveStatus::NumericalFailure;
        return best;
      }
      stalls = step < 1e-10 ? stalls + 1 : 0;
      if (stalls >= 5) {
        best.status = SolveStatus::NumericalFailure;
        return best;
      }
    }
    best.status = SolveStatus::IterLimit;
    return best;
  }

 private:
  void init() {
    Real max_a = 0.0;
    Real init_x = 10.0;
    for (int i = 0; i < m_; ++i) {
      Real na = 0.0;
      for (const auto& e : p_.a[static_cast<std::size_t>(i)]) na += Real(e.value) * e.value * (e.row == e.col ? 1 : 2);
      na = std::sqrt(na);
      max_a = std::max(max_a, na);
      init_x = std::max(init_x, n_ * (1 + std::abs(b_(i))) / (1 + na));
    }
    const Real init_z = std::max({Real(10), std::sqrt(Real(n_)), norm_c_, max_a});
    x_.clear();
    z_.clear();
    for (int s : p_.block_sizes) {
      x_.push_back(init_x * Mat::Identity(s, s));
      z_.push_back(init_z * Mat::Identity(s, s));
    }
    y_ = Vec::Zero(m_);
  }

  Vec apply_a(const Blocks& x) const {
    Vec r = Vec::Zero(m_);
    for (int i = 0; i < m_; ++i) {
      Real s = 0.0;
      for (const auto& e : p_.a[static_cast<std::size_t>(i)]) {
        const auto& xb = x[static_cast<std::size_t>(e.block)];
        s += e.value * (e.row == e.col ? xb(e.row, e.row) : xb(e.row, e.col) + xb(e.col, e.row));
      }
      r(i) = s;
    }
    return r;
  }

  Blocks apply_at(const Vec& y) const {
    Blocks out;
    for (int s : p_.block_sizes) out.push_back(Mat::Zero(s, s));
    for (int i = 0; i < m_; ++i) {
      const Real yi = y(i);
      if (yi == 0) continue;
      for (const auto& e : p_.a[static_cast<std::size_t>(i)]) {
        auto& ob = out[static_cast<std::size_t>(e.block)];
        ob(e.row, e.col) += yi * e.value;
        if (e.row != e.col) ob(e.col, e.row) += yi * e.value;
      }
    }
    return out;
  }

  Blocks dual_residual() const {
    Blocks aty = apply_at(y_);
    Blocks r;
    for (std::size_t k = 0; k < c_.size(); ++k) r.push_back(c_[k] - aty[k] - z_[k]);
    return r;
  }

  SdpSolution snapshot(int it) const {
    SdpSolution s;
    const Real pv = inner(c_, x_);
    const Real dv = b_.dot(y_);
    s.primal_value = static_cast<double>(pv);
    s.dual_value = static_cast<double>(dv);
    s.gap = static_cast<double>(std::abs(pv - dv));
    s.relative_gap = static_cast<double>(std::abs(pv - dv) / (1 + std::abs(pv) + std::abs(dv)));
    s.primal_infeasibility = static_cast<double>((b_ - apply_a(x_)).norm() / (1 + norm_b_));
    s.dual_infeasibility = static_cast<double>(frobenius(dual_residual()) / (1 + norm_c_));
    s.y = y_.cast<double>();
    for (const auto& x : x_) s.x.push_back(x.cast<double>());
    for (const auto& z : z_) s.z.push_back(z.cast<double>());
    s.iterations = it;
    return s;
  }

  // Largest alpha in (0, 1] keeping m + alpha * dm positive definite,
  // damped by `gamma`.
  static Real step_length(const Blocks& m, const Blocks& dm, Real gamma) {
    Real alpha_max = std::numeric_limits<Real>::infinity();
    for (std::size_t k = 0; k < m.size(); ++k) {
      Eigen::LLT<Mat> llt(m[k]);
      if (llt.info() != Eigen::Success) return 0.0;
      const Mat l_inv = llt.matrixL().solve(Mat::Identity(m[k].rows(), m[k].cols()));
      const Mat s = sym(l_inv * dm[k] * l_inv.transpose());
      const Real lmin = Eigen::SelfAdjointEigenSolver<Mat>(s, Eigen::EigenvaluesOnly).eigenvalues()(0);
      if (lmin < 0) alpha_max = std::min(alpha_max, -1 / lmin);
    }
    return std::min(Real(1), gamma * alpha_max);
  }

  // M_ij = Tr(A_i X A_j W) = sum over entries (p,q) of A_i and (r,s) of A_j
  // of a_pq b_rs X(q,r) W(s,p). The constraint matrices of moment problems
  // are very sparse, so this beats forming X A_j W densely.
  Mat schur(const Blocks& w) const {
    Mat mm = Mat::Zero(m_, m_);
    for (std::size_t k = 0; k < index_.size(); ++k) {
      const auto& bi = index_[k];
      const auto& x = x_[k];
      const auto& wk = w[k];
      const std::size_t t = bi.constraint.size();
      for (std::size_t jj = 0; jj < t; ++jj) {
        const int j = bi.constraint[jj];
        for (std::size_t ii = 0; ii <= jj; ++ii) {
          Real s = 0.0;
          for (const auto& e : bi.entries[ii]) {
            for (const auto& f : bi.entries[jj]) s += e.v * f.v * x(e.q, f.p) * wk(f.q, e.p);
          }
          const int i = bi.constraint[ii];
          mm(i, j) += s;
          if (i != j) mm(j, i) += s;
        }
      }
    }
    return mm;
  }

  // One predictor-corrector step. Returns false on factorization failure.
  bool iterate(Real& step) {
    const std::size_t nb = x_.size();
    Blocks w(nb);
    for (std::size_t k = 0; k < nb; ++k) {
      Eigen::LLT<Mat> llt(z_[k]);
      if (llt.info() != Eigen::Success) return false;
      w[k] = sym(llt.solve(Mat::Identity(z_[k].rows(), z_[k].cols())));
    }
    const Real mu = inner(x_, z_) / n_;
    const Vec rp = b_ - apply_a(x_);
    const Blocks rd = dual_residual();

    const Mat mm = schur(w);
    Eigen::LLT<Mat> chol(mm);
    Eigen::LDLT<Mat> ldlt;
    const bool use_llt = chol.info() == Eigen::Success;
    if (!use_llt) {
      ldlt.compute(mm);
      if (ldlt.info() != Eigen::Success) return false;
    }
    auto solve = [&](const Vec& r) -> Vec {
      if (use_llt) return chol.solve(r);
      return ldlt.solve(r);
    };

    Blocks xrdw(nb);
    for (std::size_t k = 0; k < nb; ++k) xrdw[k] = x_[k] * rd[k] * w[k];

    // dX = sigma mu W - X - corr W - X R_d W + X (sum dy_j A_j) W, symmetrised;
    // dZ = R_d - sum dy_j A_j; dy from A(dX) = r_p.
    auto direction = [&](Real sigma_mu, const Blocks* corr, Blocks& dx, Vec& dy, Blocks& dz) {
      Blocks base(nb);
      Blocks base_sym(nb);
      for (std::size_t k = 0; k < nb; ++k) {
        base[k] = sigma_mu * w[k] - x_[k] - xrdw[k];
        if (corr) base[k] -= (*corr)[k] * w[k];
        base_sym[k] = sym(base[k]);
      }
      const Vec a_base = apply_a(base_sym);
      dy = solve(rp - a_base);
      // A(dX) is affine in dy with slope M; refine dy against the residual
      // evaluated directly, which M's conditioning would otherwise spoil.
      for (int pass = 0; pass < 3; ++pass) {
        const Blocks aty = apply_at(dy);
        Blocks xaw(nb);
        for (std::size_t k = 0; k < nb; ++k) xaw[k] = sym(x_[k] * aty[k] * w[k]);
        const Vec res = rp - a_base - apply_a(xaw);
        if (res.norm() <= 1e-15L * (1 + rp.norm() + a_base.norm())) break;
        dy += solve(res);
      }
      const Blocks aty = apply_at(dy);
      dx.resize(nb);
      dz.resize(nb);
      for (std::size_t k = 0; k < nb; ++k) {
        dz[k] = rd[k] - aty[k];
        dx[k] = sym(base[k] + x_[k] * aty[k] * w[k]);
      }
    };

    Blocks dx, dz;
    Vec dy;
    direction(0, nullptr, dx, dy, dz);
    const Real ap = step_length(x_, dx, 1);
    const Real ad = step_length(z_, dz, 1);
    Blocks xa(nb), za(nb);
    for (std::size_t k = 0; k < nb; ++k) {
      xa[k] = x_[k] + ap * dx[k];
      za[k] = z_[k] + ad * dz[k];
    }
    const Real mu_aff = inner(xa, za) / n_;
    const Real sigma = std::clamp(std::pow(std::max(Real(0), mu_aff) / mu, Real(3)), Real(0), Real(1));

    Blocks corr(nb);
    for (std::size_t k = 0; k < nb; ++k) corr[k] = dx[k] * dz[k];
    direction(sigma * mu, &corr, dx, dy, dz);

    const Real gamma = 0.95;
    const Real sp = step_length(x_, dx, gamma);
    const Real sd = step_length(z_, dz, gamma);
    for (std::size_t k = 0; k < nb; ++k) {
      x_[k] = sym(x_[k] + sp * dx[k]);
      z_[k] = sym(z_[k] + sd * dz[k]);
    }
    y_ += sd * dy;
    step = std::max(sp, sd);
    return true;
  }

  const SdpProblem& p_;
  SdpOptions opt_;
  int m_ = 0;
  int n_ = 0;
  Vec b_;
  Real norm_b_ = 0.0;
  Real norm_c_ = 0.0;
  std::vector<BlockIndex> index_;
  Blocks c_;
  Blocks x_;
  Blocks z_;
  Vec y_;
};

}  // namespace

SdpSolution solve_sdp(const SdpProblem& p, const SdpOptions& options) {
  p.check();
  InteriorPoint ipm(p, options);
  return ipm.run();
}

// ---------------------------------------------------------------------------

LmiBuilder::LmiBuilder(int num_variables) {
  p_.a.resize(static_cast<std::size_t>(num_variables));
  p_.b = Eigen::VectorXd::Zero(num_variables);
}

int LmiBuilder::add_block(int size) {
  p_.block_sizes.push_back(size);
  return static_cast<int>(p_.block_sizes.size()) - 1;
}

namespace {
SparseEntry upper(int block, int row, int col, double v) {
  if (row > col) std::swap(row, col);
  return {block, row, col, v};
}
}  // namespace

void LmiBuilder::add_constant(int block, int row, int col, double v) {
  if (v != 0.0) p_.c.push_back(upper(block, row, col, v));
}

void LmiBuilder::add_term(int var, int block, int row, int col, double v) {
  if (v != 0.0) p_.a.at(static_cast<std::size_t>(var)).push_back(upper(block, row, col, -v));
}

void LmiBuilder::set_objective(int var, double coefficient) { p_.b(var) = coefficient; }

SdpProblem LmiBuilder::build() const { return p_; }

void write_sdpa_sparse(std::ostream& os, const SdpProblem& p) {
  // SDPA: minimise c^T x s.t. sum_i x_i F_i - F_0 >= 0. With x = y this is
  // our dual side with c = -b, F_i = -A_i, F_0 = -C; its optimum is the
  // negated dual value.
  os << "\"cfrac problem; SDPA optimum = -(dual value)\"\n";
  os << p.num_constraints() << " = mDIM\n";
  os << p.block_sizes.size() << " = nBLOCK\n";
  for (std::size_t k = 0; k < p.block_sizes.size(); ++k) os << (k ? " " : "") << p.block_sizes[k];
  os << " = bLOCKsTRUCT\n";
  os.precision(17);
  for (int i = 0; i < p.num_constraints(); ++i) os << (i ? " " : "") << -p.b(i);
  os << "\n";
  for (const auto& e : p.c) os << 0 << ' ' << e.block + 1 << ' ' << e.row + 1 << ' ' << e.col + 1 << ' ' << -e.value << '\n';
  for (int i = 0; i < p.num_constraints(); ++i) {
    for (const auto& e : p.a[static_cast<std::size_t>(i)]) {
      os << i + 1 << ' ' << e.block + 1 << ' ' << e.row + 1 << ' ' << e.col + 1 << ' ' << -e.value << '\n';
    }
  }
}

}  // namespace cfrac
