#pragma once

#include <Eigen/Dense>
#include <vector>

namespace damageid {

/// Uniform time grid on [0, horizon] with n_steps intervals.
struct TimeGrid {
  double horizon = 1.0;
  int n_steps = 1;

  double dt() const { return horizon / n_steps; }
  int n_times() const { return n_steps + 1; }
  double time(int m) const { return horizon * m / n_steps; }
  void validate() const;
};

/// Right-hand side of the damage evolution, (1-d)^(-alpha) * y, evaluated
/// componentwise. Requires d < 1.
Eigen::VectorXd damage_rhs(double alpha, const Eigen::VectorXd& d, const Eigen::VectorXd& y);

/// Advances one implicit trapezoidal step of d' = (1-d)^(-alpha) y with a
/// per-component scalar Newton iteration (residual below 1e-13, at most 50
/// iterations; throws std::runtime_error on non-convergence).
Eigen::VectorXd damage_step(double alpha, double dt, const Eigen::VectorXd& d_old,
                            const Eigen::VectorXd& y_old, const Eigen::VectorXd& y_new);

/// Integrates the damage evolution over the whole grid for a fixed source
/// history y[m] (one vector per grid time). Returns the damage trajectory,
/// size grid.n_times(), with trajectory[0] = d0.
std::vector<Eigen::VectorXd> integrate_damage(const TimeGrid& grid, double alpha,
                                              const Eigen::VectorXd& d0,
                                              const std::vector<Eigen::VectorXd>& y);

/// Verifies omega0 <= d <= omega1 componentwise over a trajectory. Values
/// exceeding omega1 by at most `slack` (time-integration round-off) are
/// clamped in place; larger violations throw std::domain_error.
void enforce_damage_bounds(std::vector<Eigen::VectorXd>& trajectory, double omega0, double omega1,
                           double slack = 1e-12);

}  // namespace damageid
