#include "damageid/damage.hpp"

#include <cmath>
#include <stdexcept>

namespace damageid {

void TimeGrid::validate() const {
  if (horizon <= 0.0) throw std::invalid_argument("time.horizon must be positive");
  if (n_steps < 1) throw std::invalid_argument("time.n_steps must be at least 1");
}

Eigen::VectorXd damage_rhs(double alpha, const Eigen::VectorXd& d, const Eigen::VectorXd& y) {
  Eigen::VectorXd out(d.size());
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (d(i) >= 1.0) throw std::domain_error("damage_rhs: damage reached 1");
    out(i) = std::pow(1.0 - d(i), -alpha) * y(i);
  }
  return out;
}

Eigen::VectorXd damage_step(double alpha, double dt, const Eigen::VectorXd& d_old,
                            const Eigen::VectorXd& y_old, const Eigen::VectorXd& y_new) {
  Eigen::VectorXd d_new(d_old.size());
  for (Eigen::Index i = 0; i < d_old.size(); ++i) {
    const double base = d_old(i) + dt / 2.0 * std::pow(1.0 - d_old(i), -alpha) * y_old(i);
    // Newton on F(d) = d - base - dt/2 (1-d)^(-alpha) y_new
    double d = d_old(i);
    bool converged = false;
    for (int it = 0; it < 50; ++it) {
      const double pw = std::pow(1.0 - d, -alpha);
      const double res = d - base - dt / 2.0 * pw * y_new(i);
      if (std::abs(res) <= 1e-13) {
        converged = true;
        break;
      }
      const double slope = 1.0 - dt / 2.0 * alpha * pw / (1.0 - d) * y_new(i);
      d -= res / slope;
      if (d >= 1.0) d = (1.0 + d_old(i)) / 2.0;  // keep the iterate in (d_old, 1)
    }
    if (!converged) throw std::runtime_error("damage_step: Newton iteration did not converge");
    d_new(i) = d;
  }
  return d_new;
}

std::vector<Eigen::VectorXd> integrate_damage(const TimeGrid& grid, double alpha,
                                              const Eigen::VectorXd& d0,
                                              const std::vector<Eigen::VectorXd>& y) {
  grid.validate();
  if (static_cast<int>(y.size()) != grid.n_times())
    throw std::invalid_argument("integrate_damage: source history size mismatch");
  std::vector<Eigen::VectorXd> traj(grid.n_times());
  traj[0] = d0;
  for (int m = 0; m < grid.n_steps; ++m)
    traj[m + 1] = damage_step(alpha, grid.dt(), traj[m], y[m], y[m + 1]);
  return traj;
}

void enforce_damage_bounds(std::vector<Eigen::VectorXd>& trajectory, double omega0, double omega1,
                           double slack) {
  for (auto& d : trajectory)
    for (Eigen::Index i = 0; i < d.size(); ++i) {
      if (d(i) < omega0 - slack || d(i) > omega1 + slack)
        throw std::domain_error("damage trajectory left [omega0, omega1]");
      if (d(i) > omega1) d(i) = omega1;
      if (d(i) < omega0) d(i) = omega0;
    }
}

}  // namespace damageid
