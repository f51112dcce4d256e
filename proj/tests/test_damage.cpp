#include <doctest.h>

#include <cmath>
#include <vector>

#include "damageid/damage.hpp"

using namespace damageid;

namespace {

/// Closed form of d' = (1-d)^{-1} y0, d(0)=0: (1-d)^2 = 1 - 2 y0 t.
double closed_form(double y0, double t) { return 1.0 - std::sqrt(1.0 - 2.0 * y0 * t); }

double max_error(int n_steps) {
  TimeGrid grid{1.0, n_steps};
  const double y0 = 0.25;
  std::vector<Eigen::VectorXd> y(grid.n_times(), Eigen::VectorXd::Constant(1, y0));
  const auto traj = integrate_damage(grid, 1.0, Eigen::VectorXd::Zero(1), y);
  double err = 0.0;
  for (int m = 0; m < grid.n_times(); ++m)
    err = std::max(err, std::abs(traj[m](0) - closed_form(y0, grid.time(m))));
  return err;
}

}  // namespace

TEST_CASE("trapezoidal damage integration hits the separable closed form") {
  CHECK(max_error(1000) <= 1e-6);
  CHECK(max_error(1000) > 0.0);  // not an identity by accident
}

TEST_CASE("damage integration converges at second order") {
  const double e1 = max_error(250);
  const double e2 = max_error(500);
  const double slope = std::log2(e1 / e2);
  CHECK(slope == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("zero source freezes the damage") {
  TimeGrid grid{2.0, 16};
  std::vector<Eigen::VectorXd> y(grid.n_times(), Eigen::VectorXd::Zero(3));
  Eigen::VectorXd d0(3);
  d0 << 0.0, 0.1, 0.3;
  const auto traj = integrate_damage(grid, 1.5, d0, y);
  for (const auto& d : traj) CHECK((d - d0).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("damage rhs rejects damage at 1") {
  CHECK_THROWS_AS(damage_rhs(1.0, Eigen::VectorXd::Ones(1), Eigen::VectorXd::Ones(1)),
                  std::domain_error);
}

TEST_CASE("bounds enforcement clamps round-off and flags violations") {
  std::vector<Eigen::VectorXd> traj{Eigen::VectorXd::Constant(1, 0.5 + 1e-13)};
  enforce_damage_bounds(traj, 0.0, 0.5, 1e-12);
  CHECK(traj[0](0) == 0.5);
  std::vector<Eigen::VectorXd> bad{Eigen::VectorXd::Constant(1, 0.51)};
  CHECK_THROWS_AS(enforce_damage_bounds(bad, 0.0, 0.5, 1e-12), std::domain_error);
}

TEST_CASE("grid validation") {
  CHECK_THROWS_AS((TimeGrid{0.0, 4}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((TimeGrid{1.0, 0}.validate()), std::invalid_argument);
}
