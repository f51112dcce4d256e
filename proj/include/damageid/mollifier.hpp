#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "damageid/mesh.hpp"

namespace damageid {

/// Discrete mollified gradient D_j^mu u_i = mu^{-1}(u_i(. + mu e_j) - u_i),
/// realized as an explicit sparse stencil matrix so the transpose used by the
/// adjoint is exact.
struct MollifierSpec {
  /// Mollification radius mu; must be at least one mesh spacing.
  double radius = 0.1;
  /// Pointwise difference quotient, or averaging over an indicator window of
  /// width mu before differencing.
  enum class Variant { kDifferenceQuotient, kIndicatorAverage };
  Variant variant = Variant::kDifferenceQuotient;

  void validate(const Mesh& mesh) const;
};

/// Stencil matrix of the mollified gradient. Rows are indexed
/// node * dim^2 + i * dim + j (component D_j^mu u_i at that node), columns
/// are full nodal dofs. Near the boundary the stencil is shifted inward so
/// every evaluation stays in the domain.
Eigen::SparseMatrix<double> mollifier_matrix(const MollifierSpec& spec, const Mesh& mesh);

/// Applies the stencil matrix: per-node samples of the mollified gradient,
/// one row per node with dim^2 columns (a single column for dim == 1).
Eigen::MatrixXd mollified_gradient(const MollifierSpec& spec, const Mesh& mesh,
                                   const Eigen::VectorXd& u_full);

/// Exact transpose of mollified_gradient: maps per-node gradient samples
/// (flattened as in mollifier_matrix rows) back to a nodal dof vector.
Eigen::VectorXd mollified_transpose(const MollifierSpec& spec, const Mesh& mesh,
                                    const Eigen::VectorXd& w);

}  // namespace damageid
