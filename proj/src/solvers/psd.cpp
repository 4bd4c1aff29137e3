#include "cfrac/solvers/psd.hpp"

#include "cfrac/error.hpp"

namespace cfrac {

PsdCheck psd_check(const Eigen::MatrixXd& m, double tol) {
  if (m.rows() != m.cols()) throw InvalidArgument("psd_check: matrix is not square");
  if (m.size() == 0) return {true, 0.0};
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > kSymmetryTol) {
    throw InvalidArgument("psd_check: matrix is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues()(0);
  return {lmin >= -tol, lmin};
}

}  // namespace cfrac
