#include <doctest.h>

#include <cmath>
#include <random>

#include "damageid/data_io.hpp"
#include "damageid/sensitivity.hpp"
#include "twin_setup.hpp"

using namespace damageid;
using damageid::testing::TwinSetup;
using damageid::testing::small_config;

namespace {

Vec random_vec(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  Vec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = gauss(rng);
  return v;
}

}  // namespace

TEST_CASE("equilibrium derivative: zero, linear, and finite-difference checks") {
  TwinSetup tw(small_config());
  const StateTrajectory state = picard_forward_solve(tw.prob, tw.truth, tw.cfg.forward);
  const int m = tw.prob.grid.n_steps / 2;
  const Vec& d = state.damage[m];
  const Vec& u = state.u[m];

  CHECK(apply_oe_derivative(tw.prob, d, u, Vec::Zero(d.size())).lpNorm<Eigen::Infinity>() ==
        0.0);

  std::mt19937_64 rng(17);
  const Vec h = 0.01 * random_vec(d.size(), rng);
  const Vec w = apply_oe_derivative(tw.prob, d, u, h);
  CHECK((apply_oe_derivative(tw.prob, d, u, (2.0 * h).eval()) - 2.0 * w)
            .lpNorm<Eigen::Infinity>() < 1e-12);

  // first-order finite-difference convergence of the damage-to-displacement map
  double prev_err = 1e100;
  for (double eps : {1e-2, 1e-3, 1e-4}) {
    const Vec u_pert =
        solve_equilibrium(tw.prob.mesh, tw.prob.material, (d + eps * h).eval(), tw.prob.rhs[m]);
    const double err = ((u_pert - u) / eps - w).lpNorm<Eigen::Infinity>();
    CHECK(err < 0.2 * prev_err);  // ~0.1 for clean O(eps)
    prev_err = err;
  }
}

TEST_CASE("adjoint elasticity solve is self-adjoint in the lumped pairing") {
  TwinSetup tw(small_config());
  const StateTrajectory state = picard_forward_solve(tw.prob, tw.truth, tw.cfg.forward);
  const Vec& d = state.damage[3];
  std::mt19937_64 rng(23);
  const Vec w1 = random_vec(tw.prob.mesh.n_dofs(), rng);
  const Vec w2 = random_vec(tw.prob.mesh.n_dofs(), rng);
  const Vec s1 = adjoint_elasticity_solve(tw.prob, d, w1);
  const Vec s2 = adjoint_elasticity_solve(tw.prob, d, w2);
  const double lhs = s1.dot(tw.prob.lumped.cwiseProduct(w2));
  const double rhs = s2.dot(tw.prob.lumped.cwiseProduct(w1));
  CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)));
}

TEST_CASE("linearization is linear and vanishes at h = 0") {
  TwinSetup tw(small_config());
  const StateTrajectory state = picard_forward_solve(tw.prob, tw.truth, tw.cfg.forward);
  const LinearizedOperator op(tw.prob, tw.truth, state, tw.gram);

  CHECK(op.apply(Vec::Zero(op.n_param())).lpNorm<Eigen::Infinity>() == 0.0);

  std::mt19937_64 rng(31);
  const Vec h1 = random_vec(op.n_param(), rng);
  const Vec h2 = random_vec(op.n_param(), rng);
  const Vec lhs = op.apply((2.0 * h1 - 0.5 * h2).eval());
  const Vec rhs = 2.0 * op.apply(h1) - 0.5 * op.apply(h2);
  CHECK((lhs - rhs).lpNorm<Eigen::Infinity>() <=
        1e-12 * std::max(1.0, rhs.lpNorm<Eigen::Infinity>()));

  // d_h starts at zero
  const auto d_h = op.linearized_damage(h1);
  CHECK(d_h.front().lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("taylor remainder of the forward operator is second order") {
  TwinSetup tw(small_config());
  const DamageProcess base = damageid::testing::interior_process(tw);
  const StateTrajectory state = picard_forward_solve(tw.prob, base, tw.cfg.forward);
  const LinearizedOperator op(tw.prob, base, state, tw.gram);
  const Vec phi = flatten_trajectory(state.u);

  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 3; ++trial) {
    Vec h = random_vec(op.n_param(), rng);
    // the base process keeps a g_max/4 margin, so these steps stay in the box
    h *= 0.2 * base.g_max / h.lpNorm<Eigen::Infinity>();
    const Vec jh = op.apply(h);
    std::vector<double> rems;
    for (double eps : {1e-1, 1e-2, 1e-3}) {
      DamageProcess gp = base;
      gp.coeffs += eps * h;
      const Vec rem = forward_operator(tw.prob, gp, tw.cfg.forward) - phi - eps * jh;
      rems.push_back(data_norm(tw.prob, rem));
    }
    const double slope = std::log10(rems[0] / rems[2]) / 2.0;
    CHECK(slope == doctest::Approx(2.0).epsilon(0.15));
  }
}

TEST_CASE("adjoint identity holds to near machine precision") {
  TwinSetup tw(small_config());
  const StateTrajectory state = picard_forward_solve(tw.prob, tw.truth, tw.cfg.forward);
  const LinearizedOperator op(tw.prob, tw.truth, state, tw.gram);
  const Vec wdiag = tw.prob.data_gram_diagonal();

  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 10; ++trial) {
    const Vec h = random_vec(op.n_param(), rng);
    const Vec r = random_vec(op.n_data(), rng);
    const Vec jh = op.apply(h);
    const double lhs = jh.dot(wdiag.cwiseProduct(r));
    const double rhs = tw.gram.inner(h, op.apply_adjoint(r));
    const double denom = data_norm(tw.prob, jh) * data_norm(tw.prob, r);
    CHECK(std::abs(lhs - rhs) / denom <= 1e-8);
  }
}

TEST_CASE("adjoint damage march is the exact transpose of the linear ODE path") {
  TwinSetup tw(small_config());
  const StateTrajectory state = picard_forward_solve(tw.prob, tw.truth, tw.cfg.forward);
  const LinearizedOperator op(tw.prob, tw.truth, state, tw.gram);

  std::mt19937_64 rng(61);
  const Vec h = random_vec(op.n_param(), rng);
  std::vector<Vec> e(tw.prob.n_times());
  for (auto& slice : e) slice = random_vec(tw.prob.mesh.n_nodes(), rng);

  const auto d_h = op.linearized_damage(h);
  double lhs = 0.0;
  for (int m = 0; m < tw.prob.n_times(); ++m) lhs += e[m].dot(d_h[m]);
  const double rhs = h.dot(op.collect_gradient(op.adjoint_damage(e)));
  CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(lhs)));
}

TEST_CASE("gram solve smooths the raw gradient") {
  TwinSetup tw(small_config());
  const StateTrajectory state = picard_forward_solve(tw.prob, tw.truth, tw.cfg.forward);
  const LinearizedOperator op(tw.prob, tw.truth, state, tw.gram);
  std::mt19937_64 rng(71);
  const Vec r = random_vec(op.n_data(), rng);
  const Vec raw = op.apply_adjoint_raw(r);
  const Vec smooth = op.apply_adjoint(r);
  // roughness measured by the H^s Rayleigh quotient
  const auto roughness = [&](const Vec& v) {
    return tw.gram.inner(v, v) / v.squaredNorm();
  };
  CHECK(roughness(smooth) < roughness(raw));
}
