#pragma once

#include <Eigen/Dense>

namespace cfrac {

struct PsdCheck {
  bool psd = false;
  double min_eig = 0.0;
};

inline constexpr double kSymmetryTol = 1e-12;

/// Smallest eigenvalue of a symmetric matrix and whether it is >= -tol.
/// Throws InvalidArgument when |m - m^T| exceeds kSymmetryTol anywhere.
PsdCheck psd_check(const Eigen::MatrixXd& m, double tol);

}  // namespace cfrac
