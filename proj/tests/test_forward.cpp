#include <doctest.h>

#include <cmath>

#include "damageid/forward.hpp"
#include "twin_setup.hpp"

using namespace damageid;
using damageid::testing::TwinSetup;
using damageid::testing::small_config;

TEST_CASE("zero process freezes damage and converges in one sweep") {
  TwinSetup tw(small_config() + "[truth]\nkind = zero\n");
  const StateTrajectory state = picard_forward_solve(tw.prob, tw.truth, tw.cfg.forward);
  CHECK(state.sweeps == 1);
  for (const auto& d : state.damage)
    CHECK((d - tw.prob.d0).lpNorm<Eigen::Infinity>() == 0.0);
  // displacement equals the undamaged equilibrium at every time
  const Vec u0 = solve_equilibrium(tw.prob.mesh, tw.prob.material, tw.prob.d0, tw.prob.rhs[0]);
  for (const auto& u : state.u) CHECK((u - u0).lpNorm<Eigen::Infinity>() < 1e-14);
}

TEST_CASE("unloaded body stays at rest when g(.,.,0) = 0") {
  TwinSetup tw(small_config() + "[loads]\ntraction_x = 0\nbody_x = 0\n");
  // force g(., ., 0) = 0 exactly by zeroing the coefficients active at y = 0
  DamageProcess g = tw.truth;
  const Eigen::VectorXd at_zero = g.basis.ybasis.eval(0.0);
  for (int tc = 0; tc < g.basis.n_t; ++tc)
    for (int sc = 0; sc < g.basis.n_space(); ++sc)
      for (int j = 0; j < g.basis.n_y(); ++j)
        if (at_zero(j) != 0.0) g.coeffs(g.basis.coeff_index(tc, sc, j)) = 0.0;
  const StateTrajectory state = picard_forward_solve(tw.prob, g, tw.cfg.forward);
  for (const auto& u : state.u) CHECK(u.lpNorm<Eigen::Infinity>() == 0.0);
  for (const auto& d : state.damage)
    CHECK((d - tw.prob.d0).lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("converged picard iterate is a fixed point of the sweep") {
  TwinSetup tw(small_config());
  const StateTrajectory state = picard_forward_solve(tw.prob, tw.truth, tw.cfg.forward);
  CHECK(state.final_update <= tw.cfg.forward.tolerance);
  const auto again = fixed_point_sweep(tw.prob, tw.truth, state.damage);
  double change = 0.0;
  for (int m = 0; m < tw.prob.n_times(); ++m)
    change = std::max(change, (again[m] - state.damage[m]).lpNorm<Eigen::Infinity>());
  CHECK(change <= tw.cfg.forward.tolerance);
}

TEST_CASE("damage stays within the admissible bounds along the solve") {
  TwinSetup tw(small_config());
  const StateTrajectory state = picard_forward_solve(tw.prob, tw.truth, tw.cfg.forward);
  for (const auto& d : state.damage) {
    CHECK(d.minCoeff() >= tw.prob.material.omega0);
    CHECK(d.maxCoeff() <= tw.prob.material.omega1);
  }
  // damage is nondecreasing in time (nonnegative process)
  for (int m = 0; m + 1 < tw.prob.n_times(); ++m)
    CHECK((state.damage[m + 1] - state.damage[m]).minCoeff() >= -1e-12);
}

TEST_CASE("tightly-coupled per-step march agrees with global picard") {
  TwinSetup tw(small_config());
  const StateTrajectory state = picard_forward_solve(tw.prob, tw.truth, tw.cfg.forward);

  // independent integrator: inner fixed point per step on the same grid
  const Problem& prob = tw.prob;
  const double dt = prob.grid.dt();
  Vec d = prob.d0;
  auto source_at = [&](int m, const Vec& dm) {
    const Vec u = solve_equilibrium(prob.mesh, prob.material, dm, prob.rhs[m]);
    const int comps = prob.mesh.dim * prob.mesh.dim;
    const Vec flat = prob.moll_matrix * u;
    Eigen::MatrixXd grad(prob.mesh.n_nodes(), comps);
    for (int n = 0; n < prob.mesh.n_nodes(); ++n)
      for (int c = 0; c < comps; ++c) grad(n, c) = flat(n * comps + c);
    return apply_nemytskii(tw.truth, prob.grid.time(m), prob.mesh,
                           feature_field(grad, prob.mesh.dim));
  };
  double worst = 0.0;
  Vec y_old = source_at(0, d);
  for (int m = 0; m < prob.grid.n_steps; ++m) {
    Vec d_next = d;
    for (int inner = 0; inner < 200; ++inner) {
      const Vec y_new = source_at(m + 1, d_next);
      const Vec candidate = damage_step(prob.material.alpha, dt, d, y_old, y_new);
      const double change = (candidate - d_next).lpNorm<Eigen::Infinity>();
      d_next = candidate;
      if (change <= 1e-12) break;
    }
    d = d_next;
    y_old = source_at(m + 1, d);
    worst = std::max(worst, (d - state.damage[m + 1]).lpNorm<Eigen::Infinity>());
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("contraction diagnostic: zero process gives q = 0, q decreases in lambda") {
  TwinSetup zero(small_config() + "[truth]\nkind = zero\n");
  CHECK(contraction_estimate(zero.prob, zero.truth, 4.0, 2, 1u) == 0.0);

  TwinSetup tw(small_config());
  double prev = 1e100;
  bool some_below_one = false;
  for (double lam : {1.0, 4.0, 16.0}) {
    const double q = contraction_estimate(tw.prob, tw.truth, lam, 3, 2u);
    CHECK(q <= prev + 1e-12);
    prev = q;
    if (q < 1.0) some_below_one = true;
  }
  CHECK(some_below_one);
}
