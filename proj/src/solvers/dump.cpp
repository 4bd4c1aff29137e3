#include "cfrac/solvers/dump.hpp"

#include <ostream>

namespace cfrac {

void write_lp_text(std::ostream& os, const LpProblem& p) {
  os.precision(17);
  os << (p.maximize ? "maximize" : "minimize") << '\n';
  for (Eigen::Index j = 0; j < p.num_variables(); ++j) {
    if (p.objective(j) != 0.0) os << "  " << p.objective(j) << " x" << j << '\n';
  }
  os << "subject to\n";
  for (Eigen::Index i = 0; i < p.num_rows(); ++i) {
    os << "  r" << i << ':';
    for (Eigen::Index j = 0; j < p.num_variables(); ++j) {
      if (p.constraints(i, j) != 0.0) os << ' ' << p.constraints(i, j) << " x" << j;
    }
    switch (p.senses[static_cast<std::size_t>(i)]) {
      case RowSense::LessEqual: os << " <= "; break;
      case RowSense::Equal: os << " = "; break;
      case RowSense::GreaterEqual: os << " >= "; break;
    }
    os << p.rhs(i) << '\n';
  }
  os << "bounds\n";
  for (Eigen::Index j = 0; j < p.num_variables(); ++j) {
    const bool free = !p.free_variables.empty() && p.free_variables[static_cast<std::size_t>(j)];
    os << "  x" << j << (free ? " free" : " >= 0") << '\n';
  }
}

void write_sdp_blocks(std::ostream& os, const SdpProblem& p) {
  os.precision(17);
  os << "blocks";
  for (int s : p.block_sizes) os << ' ' << s;
  os << "\nb";
  for (int i = 0; i < p.num_constraints(); ++i) os << ' ' << p.b(i);
  os << '\n';
  for (const auto& e : p.c) os << 0 << ' ' << e.block << ' ' << e.row << ' ' << e.col << ' ' << e.value << '\n';
  for (int i = 0; i < p.num_constraints(); ++i) {
    for (const auto& e : p.a[static_cast<std::size_t>(i)]) {
      os << i + 1 << ' ' << e.block << ' ' << e.row << ' ' << e.col << ' ' << e.value << '\n';
    }
  }
}

}  // namespace cfrac
