#pragma once

#include <vector>

#include "damageid/problem.hpp"
#include "damageid/process.hpp"

namespace damageid {

/// Settings of the global-in-time Picard fixed-point iteration.
struct ForwardConfig {
  double tolerance = 1e-10;  ///< sup-norm stopping tolerance on the damage update
  int max_sweeps = 100;
  double lambda = 8.0;  ///< weight of the Bielecki norm used by diagnostics
};

/// Converged coupled state: displacements and damage on the full time grid,
/// plus per-time strain-argument samples and the Picard convergence record.
struct StateTrajectory {
  std::vector<Vec> u;        ///< full dof displacement per time
  std::vector<Vec> damage;   ///< nodal damage per time
  std::vector<Vec> feature;  ///< nodal strain-argument samples per time
  int sweeps = 0;
  double final_update = 0.0;
  std::vector<double> update_history;
};

/// One application of the fixed-point map Psi = (damage integration) after
/// (Nemytskii) after (mollified gradient) after (equilibrium solves), acting
/// on a damage trajectory. Building block of the Picard solver and of the
/// contraction diagnostic. The output trajectory is clamped to
/// [omega0, omega1] (overshoot up to O(dt^2) is time-integration error).
std::vector<Vec> fixed_point_sweep(const Problem& prob, const DamageProcess& g,
                                   const std::vector<Vec>& damage);

/// Picard iteration on the damage trajectory, started from the constant
/// trajectory d(t) = d0, until the sup-norm update drops below the tolerance.
/// Throws std::runtime_error carrying the update-norm history on
/// non-convergence.
StateTrajectory picard_forward_solve(const Problem& prob, const DamageProcess& g,
                                     const ForwardConfig& cfg);

/// Forward operator: converged displacement trajectory flattened into the
/// space-time data layout (see Problem::data_gram_diagonal).
Vec forward_operator(const Problem& prob, const DamageProcess& g, const ForwardConfig& cfg);

/// Weighted trajectory norm max_m exp(-lambda t_m) |v_m|_inf.
double bielecki_norm(const TimeGrid& grid, const std::vector<Vec>& traj, double lambda);

/// Empirical two-sweep contraction factor: max over random admissible
/// trajectory pairs of |Psi^2 d1 - Psi^2 d2|_lambda / |d1 - d2|_lambda.
double contraction_estimate(const Problem& prob, const DamageProcess& g, double lambda,
                            int trials, unsigned seed);

}  // namespace damageid
