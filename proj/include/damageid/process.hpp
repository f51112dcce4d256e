#pragma once

#include <Eigen/Dense>

#include "damageid/bspline.hpp"
#include "damageid/mesh.hpp"

namespace damageid {

/// Tensor-product representation of the damage process g(t, x, y):
/// piecewise-constant cells in t and in x, clamped cubic B-splines in the
/// strain argument y on [-ybar, ybar].
struct ProcessBasis {
  double horizon = 1.0;  ///< time extent
  int n_t = 1;           ///< time cells
  int dim = 1;
  double lx = 1.0, ly = 1.0;
  int nx_cells = 1, ny_cells = 1;  ///< spatial cells per axis
  BSplineBasis ybasis;             ///< strain-argument basis on [-ybar, ybar]

  int n_y() const { return ybasis.size(); }
  int n_space() const { return dim == 1 ? nx_cells : nx_cells * ny_cells; }
  int size() const { return n_t * n_space() * n_y(); }

  int time_cell(double t) const;
  int space_cell(double px, double py) const;
  int coeff_index(int tc, int sc, int j) const { return (tc * n_space() + sc) * n_y() + j; }

  void validate() const;
};

/// A damage process: coefficients over a ProcessBasis, together with the
/// admissible upper bound g_max. Coefficients in [0, g_max] imply
/// 0 <= g <= g_max pointwise because the spline basis is a partition of unity.
struct DamageProcess {
  ProcessBasis basis;
  Eigen::VectorXd coeffs;
  double g_max = 1.0;

  /// g(t, x, y); the argument y is clamped to [-ybar, ybar].
  double eval(double t, double px, double py, double y) const;
  /// dg/dy(t, x, y); zero outside [-ybar, ybar] (derivative of the clamped
  /// constant extension).
  double eval_dy(double t, double px, double py, double y) const;
};

/// Entrywise Nemytskii application at one time: node-wise g(t, x_node, y_node)
/// for a sampled argument field.
Eigen::VectorXd apply_nemytskii(const DamageProcess& p, double t, const Mesh& mesh,
                                const Eigen::VectorXd& y_field);
/// Node-wise dg/dy at the sampled argument field.
Eigen::VectorXd apply_nemytskii_dy(const DamageProcess& p, double t, const Mesh& mesh,
                                   const Eigen::VectorXd& y_field);

/// Matrix of basis values: row `node`, column `coeff` holds the basis function
/// of that coefficient evaluated at (t, x_node, y_field(node)). The Nemytskii
/// values are then basis_matrix * coeffs; this is the derivative of the
/// forward map with respect to the coefficients.
Eigen::MatrixXd basis_matrix(const ProcessBasis& basis, double t, const Mesh& mesh,
                             const Eigen::VectorXd& y_field);

/// Clamps the coefficients entrywise to [0, g_max]; idempotent.
DamageProcess project_admissible(DamageProcess p);

/// Scalar strain feature of a flattened gradient sample (dim^2 components,
/// row-major): the gradient itself for dim == 1, the Frobenius norm of the
/// symmetric part for dim == 2.
double gradient_feature(const Eigen::VectorXd& grad_comps, int dim);
/// Derivative of gradient_feature with respect to the gradient components
/// (zero at the nonsmooth origin).
Eigen::VectorXd gradient_feature_deriv(const Eigen::VectorXd& grad_comps, int dim);
/// Per-node feature field from per-node gradient samples (rows of
/// mollified_gradient output).
Eigen::VectorXd feature_field(const Eigen::MatrixXd& grad, int dim);
/// Per-node feature derivatives, one row per node.
Eigen::MatrixXd feature_field_deriv(const Eigen::MatrixXd& grad, int dim);

}  // namespace damageid
