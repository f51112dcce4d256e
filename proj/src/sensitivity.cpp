#include "damageid/sensitivity.hpp"

#include <cmath>
#include <stdexcept>

namespace damageid {

Vec apply_oe_derivative(const Problem& prob, const Vec& d_slice, const Vec& u_full,
                        const Vec& d_h) {
  const SpMat c = assemble_weighted_pairing(prob.mesh, prob.material, u_full);
  return StiffnessFactor(prob.mesh, prob.material, d_slice).solve_to_full(c * d_h);
}

Vec adjoint_elasticity_solve(const Problem& prob, const Vec& d_slice, const Vec& w_full) {
  const Vec rhs = restrict_full(prob.mesh, prob.lumped.cwiseProduct(w_full));
  return StiffnessFactor(prob.mesh, prob.material, d_slice).solve_to_full(rhs);
}

LinearizedOperator::LinearizedOperator(const Problem& prob, const DamageProcess& g,
                                       const StateTrajectory& state, const ParameterGram& gram)
    : prob_(&prob), gram_(&gram) {
  const Mesh& mesh = prob.mesh;
  const int n_times = prob.n_times();
  const int n_nodes = mesh.n_nodes();
  const int comps = mesh.dim * mesh.dim;
  if (static_cast<int>(state.u.size()) != n_times)
    throw std::invalid_argument("linearized operator: state does not cover the grid");

  s_.resize(n_times);
  t_.resize(n_times);
  bmat_.resize(n_times);
  bscale_.resize(n_times);
  glu_.resize(n_times);
  wdiag_ = prob.data_gram_diagonal();
  const double dt = prob.grid.dt();

  for (int m = 0; m < n_times; ++m) {
    const double tm = prob.grid.time(m);
    const Vec& d = state.damage[m];
    const Vec& y = state.feature[m];

    // damage perturbation -> displacement perturbation, K(d) w = C(u) d_h
    StiffnessFactor factor(mesh, prob.material, d);
    const Eigen::MatrixXd c_dense =
        Eigen::MatrixXd(assemble_weighted_pairing(mesh, prob.material, state.u[m]));
    Eigen::MatrixXd s_full = Eigen::MatrixXd::Zero(mesh.n_dofs(), n_nodes);
    for (int j = 0; j < n_nodes; ++j) {
      const Vec w = factor.solve_free(c_dense.col(j));
      for (int i = 0; i < mesh.n_free(); ++i) s_full(mesh.full_of_free[i], j) = w(i);
    }
    s_[m] = std::move(s_full);

    // chain through mollifier and strain feature: d_h -> feature perturbation
    const Eigen::MatrixXd moll_s = prob.moll_matrix * s_[m];
    Eigen::MatrixXd grad(n_nodes, comps);
    {
      const Vec flat = prob.moll_matrix * state.u[m];
      for (int n = 0; n < n_nodes; ++n)
        for (int cc = 0; cc < comps; ++cc) grad(n, cc) = flat(n * comps + cc);
    }
    const Eigen::MatrixXd dfeat = feature_field_deriv(grad, mesh.dim);
    Eigen::MatrixXd feat_s = Eigen::MatrixXd::Zero(n_nodes, n_nodes);
    for (int n = 0; n < n_nodes; ++n)
      for (int cc = 0; cc < comps; ++cc)
        feat_s.row(n) += dfeat(n, cc) * moll_s.row(n * comps + cc);

    const Vec gval = apply_nemytskii(g, tm, mesh, y);
    const Vec dg = apply_nemytskii_dy(g, tm, mesh, y);
    Vec a(n_nodes), b(n_nodes);
    for (int n = 0; n < n_nodes; ++n) {
      const double rest = 1.0 - d(n);
      a(n) = prob.material.alpha * std::pow(rest, -(prob.material.alpha + 1.0)) * gval(n);
      b(n) = std::pow(rest, -prob.material.alpha);
    }
    bscale_[m] = b;
    t_[m] = b.cwiseProduct(dg).asDiagonal() * feat_s;
    t_[m] += Eigen::MatrixXd(a.asDiagonal());
    bmat_[m] = basis_matrix(g.basis, tm, mesh, y);

    if (m >= 1)
      glu_[m].compute(Eigen::MatrixXd::Identity(n_nodes, n_nodes) - dt / 2.0 * t_[m]);
  }
}

std::vector<Vec> LinearizedOperator::linearized_damage(const Vec& h) const {
  const int n_times = prob_->n_times();
  const double dt = prob_->grid.dt();
  std::vector<Vec> source(n_times), d_h(n_times);
  for (int m = 0; m < n_times; ++m) source[m] = bscale_[m].cwiseProduct(bmat_[m] * h);
  d_h[0] = Vec::Zero(prob_->mesh.n_nodes());
  for (int m = 0; m + 1 < n_times; ++m) {
    const Vec rhs =
        d_h[m] + dt / 2.0 * (t_[m] * d_h[m] + source[m] + source[m + 1]);
    d_h[m + 1] = glu_[m + 1].solve(rhs);
  }
  return d_h;
}

Vec LinearizedOperator::apply(const Vec& h) const {
  const auto d_h = linearized_damage(h);
  std::vector<Vec> du(d_h.size());
  for (size_t m = 0; m < d_h.size(); ++m) du[m] = s_[m] * d_h[m];
  return flatten_trajectory(du);
}

std::vector<Vec> LinearizedOperator::adjoint_damage(const std::vector<Vec>& e) const {
  const int n_times = prob_->n_times();
  const int last = n_times - 1;
  const double dt = prob_->grid.dt();
  const int n_nodes = prob_->mesh.n_nodes();
  std::vector<Vec> nu(n_times + 1, Vec::Zero(n_nodes));
  Vec lambda = e[last];
  for (int m = last; m >= 1; --m) {
    nu[m] = glu_[m].transpose().solve(lambda);
    if (m >= 1)
      lambda = e[m - 1] + nu[m] + dt / 2.0 * (t_[m - 1].transpose() * nu[m]);
  }
  std::vector<Vec> gamma(n_times);
  for (int m = 0; m < n_times; ++m) gamma[m] = dt / 2.0 * (nu[m] + nu[m + 1]);
  return gamma;
}

Vec LinearizedOperator::collect_gradient(const std::vector<Vec>& gamma) const {
  Vec raw = Vec::Zero(n_param());
  for (int m = 0; m < prob_->n_times(); ++m)
    raw += bmat_[m].transpose() * bscale_[m].cwiseProduct(gamma[m]);
  return raw;
}

Vec LinearizedOperator::apply_adjoint_raw(const Vec& r) const {
  const int n_times = prob_->n_times();
  const Eigen::Index nd = prob_->mesh.n_dofs();
  const Vec wr = wdiag_.cwiseProduct(r);
  std::vector<Vec> e(n_times);
  for (int m = 0; m < n_times; ++m)
    e[m] = s_[m].transpose() * wr.segment(static_cast<Eigen::Index>(m) * nd, nd);
  return collect_gradient(adjoint_damage(e));
}

Vec LinearizedOperator::apply_adjoint(const Vec& r) const {
  return gram_->solve(apply_adjoint_raw(r));
}

}  // namespace damageid
