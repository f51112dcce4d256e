#pragma once

#include <Eigen/Dense>

#include "damageid/process.hpp"

namespace damageid {

/// Kronecker product, row-major pairing: result((i1*rows2+i2),(j1*cols2+j2)).
Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

/// Symmetric positive-definite Gram matrix on process coefficients realizing
/// a discrete H^s inner product over (t, x, y). Built spectrally: per axis a
/// mass and a Laplace Gram are diagonalized jointly, the tensor eigenvalues
/// lam = 1 + sum of axis eigenvalues are raised to the power s, and the Gram
/// is reassembled in the mass geometry. s = 0 reproduces the plain tensor
/// mass Gram.
class ParameterGram {
 public:
  ParameterGram() = default;
  ParameterGram(const ProcessBasis& basis, double s);

  int size() const { return static_cast<int>(weights_.size()); }
  double exponent() const { return s_; }

  const Eigen::MatrixXd& matrix() const { return matrix_; }
  /// M_s x
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  /// M_s^{-1} x
  Eigen::VectorXd solve(const Eigen::VectorXd& x) const;
  /// R with M_s = R R^T.
  Eigen::MatrixXd factor() const;
  /// S with M_s^{-1} = S S^T (whitening map for singular-value probes).
  Eigen::MatrixXd inverse_factor() const;

  double inner(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const;
  double norm(const Eigen::VectorXd& a) const;

 private:
  double s_ = 0.0;
  Eigen::MatrixXd matrix_;       ///< dense M_s
  Eigen::MatrixXd modes_;        ///< V, columns M-orthonormal tensor modes
  Eigen::MatrixXd bmodes_;       ///< B = M V = (V^T)^{-1}
  Eigen::VectorXd weights_;      ///< (1 + sum lam)^s per tensor mode
};

}  // namespace damageid
