#include "cfrac/moments.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "cfrac/error.hpp"

namespace cfrac {

double MomentSequence::at(const MultiIndex& alpha) const {
  auto pos = indices().find(alpha);
  if (!pos) throw InvalidArgument("moment " + to_string(alpha) + " is beyond degree " + std::to_string(degree));
  return values[*pos];
}

MomentSequence MomentSequence::from(Context vars, int degree, const std::function<double(const MultiIndex&)>& f) {
  MomentSequence y;
  y.vars = std::move(vars);
  y.degree = degree;
  MultiIndexSet set(y.dim(), degree);
  y.values.reserve(set.size());
  for (const auto& alpha : set) y.values.push_back(f(alpha));
  return y;
}

MomentSequence operator-(const MomentSequence& a, const MomentSequence& b) {
  if (a.vars != b.vars || a.degree != b.degree) throw InvalidArgument("moment sequences live on different index sets");
  MomentSequence r = a;
  for (std::size_t i = 0; i < r.values.size(); ++i) r.values[i] -= b.values[i];
  return r;
}

int Polynomial::degree() const {
  int d = 0;
  for (const auto& [alpha, c] : coeffs) {
    if (c != 0.0) d = std::max(d, total_degree(alpha));
  }
  return d;
}

double Polynomial::operator()(const std::vector<double>& x) const {
  double r = 0.0;
  for (const auto& [alpha, c] : coeffs) {
    double t = c;
    for (std::size_t i = 0; i < alpha.size(); ++i) t *= std::pow(x[i], alpha[i]);
    r += t;
  }
  return r;
}

Polynomial box_polynomial(int dim, int j, double lo, double hi) {
  if (j < 0 || j >= dim) throw InvalidArgument("box polynomial: variable out of range");
  // -(x^2) + (lo + hi) x - lo hi
  Polynomial p;
  p.dim = dim;
  MultiIndex e = zero_index(static_cast<std::size_t>(dim));
  p.coeffs[e] = -lo * hi;
  e[static_cast<std::size_t>(j)] = 1;
  p.coeffs[e] = lo + hi;
  e[static_cast<std::size_t>(j)] = 2;
  p.coeffs[e] = -1.0;
  return p;
}

MomentMatrix moment_matrix(const MomentSequence& y, int k) {
  Polynomial one;
  one.dim = y.dim();
  one.coeffs[zero_index(static_cast<std::size_t>(y.dim()))] = 1.0;
  return localising_matrix(y, one, k);
}

MomentMatrix localising_matrix(const MomentSequence& y, const Polynomial& p, int k) {
  if (k < 0) throw InvalidArgument("matrix order must be nonnegative");
  if (p.dim != y.dim()) throw InvalidArgument("polynomial and moment sequence differ in dimension");
  if (y.degree < 2 * k + p.degree()) {
    throw InvalidArgument("moment sequence of degree " + std::to_string(y.degree) + " is too short for order " +
                          std::to_string(k));
  }
  const MultiIndexSet rows(y.dim(), k);
  const MultiIndexSet all = y.indices();
  const auto n = static_cast<Eigen::Index>(rows.size());
  MomentMatrix out;
  out.order = k;
  out.dim = y.dim();
  out.m = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = a; b < n; ++b) {
      const MultiIndex ab = add(rows[static_cast<std::size_t>(a)], rows[static_cast<std::size_t>(b)]);
      double v = 0.0;
      for (const auto& [gamma, c] : p.coeffs) v += c * y.values[all.index_of(add(ab, gamma))];
      out.m(a, b) = v;
      out.m(b, a) = v;
    }
  }
  return out;
}

MomentSequence restrict_moments(const MomentSequence& y, const Context& c) {
  if (!is_subset(c, y.vars)) throw InvalidArgument("restriction target is not a subset of the moment variables");
  std::vector<std::size_t> pos;
  for (std::size_t x : c) pos.push_back(static_cast<std::size_t>(std::find(y.vars.begin(), y.vars.end(), x) - y.vars.begin()));
  const MultiIndexSet all = y.indices();
  return MomentSequence::from(c, y.degree, [&](const MultiIndex& alpha) {
    MultiIndex g = zero_index(y.vars.size());
    for (std::size_t i = 0; i < alpha.size(); ++i) g[pos[i]] = alpha[i];
    return y.values[all.index_of(g)];
  });
}

MomentSequence context_moments(const MeasureDesc& m, int degree) {
  if (const auto* r = std::get_if<RawMoments>(&m); r && degree > r->degree) {
    throw InvalidArgument("raw moments only go up to degree " + std::to_string(r->degree));
  }
  return MomentSequence::from(context_of(m), degree, [&](const MultiIndex& alpha) { return moment(m, alpha); });
}

MomentSequence context_moments(const DiscreteTable& t, int degree) {
  return context_moments(MeasureDesc{as_dirac(t)}, degree);
}

MomentSequence context_moments(const ContextData& d, int degree) {
  return std::visit([&](const auto& v) { return context_moments(v, degree); }, d);
}

void write_matrix_text(std::ostream& os, const MomentMatrix& m) {
  os.precision(17);
  os << m.order << ' ' << m.dim << ' ' << m.m.rows() << '\n';
  for (Eigen::Index i = 0; i < m.m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.m.cols(); ++j) os << (j ? " " : "") << m.m(i, j);
    os << '\n';
  }
}

}  // namespace cfrac
