#include "cfrac/multi_index.hpp"

#include <numeric>
#include <sstream>

#include "cfrac/error.hpp"

namespace cfrac {

namespace {

std::size_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Monomials of total degree exactly r in n variables.
std::size_t exact_count(std::size_t n, int r) {
  if (r < 0) return 0;
  if (n == 0) return r == 0 ? 1 : 0;
  return binomial(static_cast<std::size_t>(r) + n - 1, n - 1);
}

void fill_degree(int dim, int remaining, std::size_t pos, MultiIndex& cur, std::vector<MultiIndex>& out) {
  if (pos + 1 == static_cast<std::size_t>(dim)) {
    cur[pos] = remaining;
    out.push_back(cur);
    return;
  }
  for (int v = remaining; v >= 0; --v) {
    cur[pos] = v;
    fill_degree(dim, remaining - v, pos + 1, cur, out);
  }
  cur[pos] = 0;
}

}  // namespace

int total_degree(const MultiIndex& alpha) { return std::accumulate(alpha.begin(), alpha.end(), 0); }

MultiIndex add(const MultiIndex& a, const MultiIndex& b) {
  if (a.size() != b.size()) throw InvalidArgument("multi-index dimension mismatch");
  MultiIndex r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

MultiIndex zero_index(std::size_t dim) { return MultiIndex(dim, 0); }

std::string to_string(const MultiIndex& alpha) {
  std::ostringstream os;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (i) os << ',';
    os << alpha[i];
  }
  return os.str();
}

MultiIndex parse_multi_index(const std::string& text) {
  MultiIndex alpha;
  std::istringstream is(text);
  std::string part;
  while (std::getline(is, part, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(part, &used);
    } catch (const std::exception&) {
      throw ParseError("bad multi-index '" + text + "'");
    }
    if (used != part.size() || v < 0) throw ParseError("bad multi-index '" + text + "'");
    alpha.push_back(v);
  }
  if (alpha.empty()) throw ParseError("empty multi-index");
  return alpha;
}

bool grlex_less(const MultiIndex& a, const MultiIndex& b) {
  int da = total_degree(a), db = total_degree(b);
  if (da != db) return da < db;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return a[i] > b[i];
  }
  return false;
}

std::size_t basis_size(int d, int k) {
  if (d < 0 || k < 0) throw InvalidArgument("basis_size needs d >= 0 and k >= 0");
  return binomial(static_cast<std::size_t>(d + k), static_cast<std::size_t>(k));
}

MultiIndexSet::MultiIndexSet(int dim, int degree) : dim_(dim), degree_(degree) {
  if (dim < 0 || degree < 0) throw InvalidArgument("MultiIndexSet needs dim >= 0 and degree >= 0");
  for (int t = 0; t <= degree; ++t) {
    degree_offset_.push_back(indices_.size());
    if (dim == 0) {
      if (t == 0) indices_.push_back({});
      continue;
    }
    MultiIndex cur(static_cast<std::size_t>(dim), 0);
    fill_degree(dim, t, 0, cur, indices_);
  }
}

std::optional<std::size_t> MultiIndexSet::find(const MultiIndex& alpha) const {
  if (alpha.size() != static_cast<std::size_t>(dim_)) return std::nullopt;
  int t = 0;
  for (int v : alpha) {
    if (v < 0) return std::nullopt;
    t += v;
  }
  if (t > degree_) return std::nullopt;
  std::size_t rank = degree_offset_[static_cast<std::size_t>(t)];
  int remaining = t;
  for (std::size_t i = 0; i + 1 < alpha.size(); ++i) {
    const std::size_t rest = alpha.size() - i - 1;
    for (int v = remaining; v > alpha[i]; --v) rank += exact_count(rest, remaining - v);
    remaining -= alpha[i];
  }
  return rank;
}

std::size_t MultiIndexSet::index_of(const MultiIndex& alpha) const {
  auto i = find(alpha);
  if (!i) throw InvalidArgument("multi-index (" + to_string(alpha) + ") outside basis of degree " +
                                std::to_string(degree_));
  return *i;
}

}  // namespace cfrac
