#include "damageid/forward.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace damageid {

namespace {

Eigen::MatrixXd reshape_gradient(const Mesh& mesh, const Vec& flat) {
  const int comps = mesh.dim * mesh.dim;
  Eigen::MatrixXd g(mesh.n_nodes(), comps);
  for (int n = 0; n < mesh.n_nodes(); ++n)
    for (int c = 0; c < comps; ++c) g(n, c) = flat(n * comps + c);
  return g;
}

Vec feature_at_time(const Problem& prob, const Vec& u_full) {
  return feature_field(reshape_gradient(prob.mesh, prob.moll_matrix * u_full),
                       prob.mesh.dim);
}

}  // namespace

std::vector<Vec> fixed_point_sweep(const Problem& prob, const DamageProcess& g,
                                   const std::vector<Vec>& damage) {
  const int n_times = prob.n_times();
  std::vector<Vec> source(n_times);
  for (int m = 0; m < n_times; ++m) {
    const Vec u = solve_equilibrium(prob.mesh, prob.material, damage[m], prob.rhs[m]);
    const Vec y = feature_at_time(prob, u);
    source[m] = apply_nemytskii(g, prob.grid.time(m), prob.mesh, y);
  }
  auto next = integrate_damage(prob.grid, prob.material.alpha, prob.d0, source);
  // trapezoidal overshoot above omega1 scales with dt^2; anything beyond that
  // indicates an inadmissible process
  const double slack = std::max(1e-10, prob.grid.dt() * prob.grid.dt());
  enforce_damage_bounds(next, 0.0, prob.material.omega1, slack);
  return next;
}

StateTrajectory picard_forward_solve(const Problem& prob, const DamageProcess& g,
                                     const ForwardConfig& cfg) {
  if (cfg.tolerance <= 0.0) throw std::invalid_argument("forward: tolerance must be positive");
  const int n_times = prob.n_times();
  std::vector<Vec> damage(n_times, prob.d0);
  StateTrajectory state;
  bool converged = false;
  for (int sweep = 0; sweep < cfg.max_sweeps; ++sweep) {
    auto next = fixed_point_sweep(prob, g, damage);
    double update = 0.0;
    for (int m = 0; m < n_times; ++m)
      update = std::max(update, (next[m] - damage[m]).lpNorm<Eigen::Infinity>());
    damage = std::move(next);
    state.update_history.push_back(update);
    state.sweeps = sweep + 1;
    state.final_update = update;
    if (update <= cfg.tolerance) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    std::ostringstream msg;
    msg << "picard_forward_solve: no convergence in " << cfg.max_sweeps
        << " sweeps; update norms:";
    for (double u : state.update_history) msg << ' ' << u;
    throw std::runtime_error(msg.str());
  }
  state.damage = std::move(damage);
  state.u.resize(n_times);
  state.feature.resize(n_times);
  for (int m = 0; m < n_times; ++m) {
    state.u[m] = solve_equilibrium(prob.mesh, prob.material, state.damage[m], prob.rhs[m]);
    state.feature[m] = feature_at_time(prob, state.u[m]);
  }
  return state;
}

Vec forward_operator(const Problem& prob, const DamageProcess& g, const ForwardConfig& cfg) {
  return flatten_trajectory(picard_forward_solve(prob, g, cfg).u);
}

double bielecki_norm(const TimeGrid& grid, const std::vector<Vec>& traj, double lambda) {
  double norm = 0.0;
  for (size_t m = 0; m < traj.size(); ++m)
    norm = std::max(norm, std::exp(-lambda * grid.time(static_cast<int>(m))) *
                              traj[m].lpNorm<Eigen::Infinity>());
  return norm;
}

double contraction_estimate(const Problem& prob, const DamageProcess& g, double lambda,
                            int trials, unsigned seed) {
  if (trials < 1) throw std::invalid_argument("contraction_estimate: trials must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, prob.material.omega1);
  auto random_trajectory = [&] {
    std::vector<Vec> d(prob.n_times());
    for (auto& slice : d) {
      slice.resize(prob.mesh.n_nodes());
      for (Eigen::Index i = 0; i < slice.size(); ++i) slice(i) = unif(rng);
    }
    return d;
  };
  double q = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    const auto d1 = random_trajectory();
    const auto d2 = random_trajectory();
    std::vector<Vec> diff(prob.n_times());
    for (int m = 0; m < prob.n_times(); ++m) diff[m] = d1[m] - d2[m];
    const double denom = bielecki_norm(prob.grid, diff, lambda);
    if (denom == 0.0) continue;
    const auto p1 = fixed_point_sweep(prob, g, fixed_point_sweep(prob, g, d1));
    const auto p2 = fixed_point_sweep(prob, g, fixed_point_sweep(prob, g, d2));
    for (int m = 0; m < prob.n_times(); ++m) diff[m] = p1[m] - p2[m];
    q = std::max(q, bielecki_norm(prob.grid, diff, lambda) / denom);
  }
  return q;
}

}  // namespace damageid
