#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <functional>
#include <vector>

#include "damageid/mesh.hpp"

namespace damageid {

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;

/// Pointwise material data. The elasticity coefficients are spatial fields;
/// for dim==1 only `young` is used, for dim==2 the isotropic Lame pair
/// (`lame_lambda`, `lame_mu`). The tensor action is assembled from these, so
/// other laws can be slotted in by changing the coefficient callbacks.
struct MaterialModel {
  std::function<double(double, double)> young = [](double, double) { return 1.0; };
  std::function<double(double, double)> lame_lambda = [](double, double) { return 1.0; };
  std::function<double(double, double)> lame_mu = [](double, double) { return 1.0; };

  double alpha = 1.0;    ///< damage exponent, >= 1
  double omega0 = 0.0;   ///< initial damage bound
  double omega1 = 0.5;   ///< partial damage bound, < 1
  double ybar = 1.0;     ///< strain-argument radius
  double horizon = 1.0;  ///< time horizon T

  /// Admissible upper bound for damage process values.
  double g_max() const;

  void validate(int dim) const;
};

/// Body force and boundary traction sampled on the time grid as nodal fields.
/// Traction values are only read at Gamma1 nodes.
struct LoadSet {
  std::vector<Eigen::MatrixXd> body;      ///< per time: n_nodes x dim
  std::vector<Eigen::MatrixXd> traction;  ///< per time: n_nodes x dim
};

/// Stiffness of the damage-degraded bilinear form, integral of
/// (1-d) E eps(u) : eps(v), on the free dofs (clamped rows/columns
/// eliminated). d is a nodal field and must satisfy 0 <= d <= omega1.
SpMat assemble_stiffness(const Mesh& mesh, const MaterialModel& mat, const Vec& d);

/// Same bilinear form without boundary elimination (full dof square matrix).
SpMat assemble_stiffness_full(const Mesh& mesh, const MaterialModel& mat, const Vec& d);

/// Mixed pairing C with C(i,j) = integral of N_j E eps(u) : eps(phi_i) for
/// free dof i and node j; maps a nodal scalar field h to the load vector of
/// the undamaged form weighted by h. This is the right-hand side operator of
/// the linearized equilibrium.
SpMat assemble_weighted_pairing(const Mesh& mesh, const MaterialModel& mat, const Vec& u_full);

/// Row-sum lumped mass per full dof.
Vec lumped_mass(const Mesh& mesh);

/// Consistent load vector on the free dofs from nodal body-force and
/// traction samples at one time.
Vec assemble_load(const Mesh& mesh, const Eigen::MatrixXd& body, const Eigen::MatrixXd& traction);

/// Holds a sparse Cholesky factorization of K(d) for repeated solves.
class StiffnessFactor {
 public:
  StiffnessFactor() = default;
  StiffnessFactor(const Mesh& mesh, const MaterialModel& mat, const Vec& d);

  Vec solve_free(const Vec& rhs_free) const;
  /// Solve and scatter into a full nodal dof vector (zeros on Gamma0).
  Vec solve_to_full(const Vec& rhs_free) const;

 private:
  const Mesh* mesh_ = nullptr;
  Eigen::SimplicialLDLT<SpMat> ldlt_;
};

/// Equilibrium solve at one time: K(d) u = rhs, u = 0 on Gamma0.
/// Returns the full nodal dof vector.
Vec solve_equilibrium(const Mesh& mesh, const MaterialModel& mat, const Vec& d, const Vec& rhs_free);

/// Strain and stress per quadrature point, Voigt layout
/// ([e11] in 1d, [e11, e22, 2 e12] in 2d).
struct StrainStress {
  Eigen::MatrixXd points;  ///< quadrature point coordinates
  Eigen::MatrixXd strain;
  Eigen::MatrixXd stress;  ///< (1-d) E eps(u)
};
StrainStress strain_stress(const Mesh& mesh, const MaterialModel& mat, const Vec& d,
                           const Vec& u_full);

/// Scatter a free dof vector into the full dof layout (zeros at Gamma0).
Vec scatter_free(const Mesh& mesh, const Vec& free_vec);
/// Restrict a full dof vector to the free dofs.
Vec restrict_full(const Mesh& mesh, const Vec& full_vec);

}  // namespace damageid
