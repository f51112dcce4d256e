#pragma once

#include <vector>

#include "damageid/damage.hpp"
#include "damageid/fem.hpp"
#include "damageid/mesh.hpp"
#include "damageid/mollifier.hpp"

namespace damageid {

/// Everything fixed about one damaged-elasticity evolution except the damage
/// process: geometry, material, time grid, mollifier and loads. Assembled
/// once and shared by the forward solver, the linearization and the adjoint.
struct Problem {
  Mesh mesh;
  MaterialModel material;
  TimeGrid grid;
  MollifierSpec mollifier;
  SpMat moll_matrix;       ///< cached mollifier stencil (node-gradients x dofs)
  std::vector<Vec> rhs;    ///< assembled free load vectors, one per grid time
  Vec lumped;              ///< lumped mass per full dof
  Vec d0;                  ///< initial damage per node, 0 <= d0 <= omega0

  int n_times() const { return grid.n_times(); }

  /// Diagonal of the space-time data Gram: trapezoidal weight in time times
  /// the lumped spatial mass, indexed (m * n_dofs + dof). Displacement data
  /// vectors use this same flat layout.
  Vec data_gram_diagonal() const;
};

/// Validates all parts, assembles loads and caches the mollifier stencil.
/// `loads` must provide body and traction samples for every grid time.
Problem build_problem(const DomainSpec& domain, const MaterialModel& material,
                      const TimeGrid& grid, const MollifierSpec& mollifier, const LoadSet& loads,
                      const Vec& d0);

/// LoadSet with the same nodal body/traction fields at every grid time.
LoadSet constant_loads(const TimeGrid& grid, const Eigen::MatrixXd& body,
                       const Eigen::MatrixXd& traction);

/// Flattens a per-time displacement trajectory (full dof vectors) into the
/// data layout of data_gram_diagonal.
Vec flatten_trajectory(const std::vector<Vec>& traj);
/// Inverse of flatten_trajectory.
std::vector<Vec> unflatten_trajectory(const Vec& flat, int n_times);

}  // namespace damageid
