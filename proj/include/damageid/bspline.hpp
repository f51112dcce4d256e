#pragma once

#include <Eigen/Dense>
#include <vector>

namespace damageid {

/// Clamped cubic B-spline basis on an interval [lo, hi] with n basis
/// functions (n >= 4), uniform interior knots. The basis is a partition of
/// unity and C^2 in the interior. Arguments outside [lo, hi] are clamped to
/// the nearest endpoint before evaluation.
class BSplineBasis {
 public:
  BSplineBasis() = default;
  BSplineBasis(double lo, double hi, int n);

  int size() const { return n_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }

  /// Values of all n basis functions at y (dense; at most 4 are nonzero).
  Eigen::VectorXd eval(double y) const;
  /// First derivatives of all basis functions at y. Zero outside [lo, hi]
  /// to match the clamped evaluation.
  Eigen::VectorXd eval_deriv(double y) const;

  /// Gram matrix of the basis, integral of B_i B_j.
  Eigen::MatrixXd mass() const;
  /// Gram matrix of the derivatives, integral of B_i' B_j'.
  Eigen::MatrixXd stiffness() const;

  const std::vector<double>& knots() const { return knots_; }

 private:
  double lo_ = 0.0, hi_ = 1.0;
  int n_ = 0;
  std::vector<double> knots_;  ///< n + 4 clamped knots
};

}  // namespace damageid
