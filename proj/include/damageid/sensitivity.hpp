#pragma once

#include <Eigen/Dense>
#include <vector>

#include "damageid/forward.hpp"
#include "damageid/gram.hpp"
#include "damageid/problem.hpp"

namespace damageid {

/// Displacement response to a damage perturbation at one time: solves
/// K(d(t)) w = C(u(t)) d_h, the derivative of the equilibrium solution
/// operator with respect to damage. Returns the full dof vector.
Vec apply_oe_derivative(const Problem& prob, const Vec& d_slice, const Vec& u_full,
                        const Vec& d_h);

/// Adjoint elasticity solve at one time: K(d(t)) u_f = restrict(lumped .* w)
/// for a full-dof data slice w. K is symmetric, so this is the transpose of
/// the forward equilibrium solve against the lumped spatial inner product.
Vec adjoint_elasticity_solve(const Problem& prob, const Vec& d_slice, const Vec& w_full);

/// The linearized forward map dPhi(g) at a converged state and its adjoint.
/// Every linear stage (equilibrium derivative, mollifier, Nemytskii
/// derivative weighting, trapezoidal ODE step) is assembled once per time
/// level, so the adjoint path is the exact algebraic transpose of the
/// forward path and the inner-product identity holds to solver precision.
class LinearizedOperator {
 public:
  LinearizedOperator(const Problem& prob, const DamageProcess& g, const StateTrajectory& state,
                     const ParameterGram& gram);

  int n_param() const { return static_cast<int>(bmat_[0].cols()); }
  int n_data() const { return prob_->n_times() * prob_->mesh.n_dofs(); }
  const ParameterGram& gram() const { return *gram_; }
  const Problem& problem() const { return *prob_; }

  /// dPhi(g) h: data-space perturbation (flat trajectory layout).
  Vec apply(const Vec& h) const;
  /// Linearized damage trajectory d_h driven by h; d_h(0) = 0.
  std::vector<Vec> linearized_damage(const Vec& h) const;

  /// J^T W r without the parameter-Gram solve (W = data Gram diagonal).
  Vec apply_adjoint_raw(const Vec& r) const;
  /// Full adjoint dPhi(g)* r = M_s^{-1} J^T W r.
  Vec apply_adjoint(const Vec& r) const;

  /// Backward-in-time adjoint of the damage march for a source trajectory e:
  /// returns the per-time multipliers gamma with
  /// sum_m <e_m, d_h_m> = sum_m <b_m .* gamma_m, Bmat_m h> for every h.
  std::vector<Vec> adjoint_damage(const std::vector<Vec>& e) const;
  /// Accumulates the raw parameter gradient sum_m Bmat_m^T (b_m .* gamma_m).
  Vec collect_gradient(const std::vector<Vec>& gamma) const;

  /// Displacement response at time m to a linearized damage slice.
  Vec oe_derivative(int m, const Vec& d_h) const { return s_[m] * d_h; }

 private:
  const Problem* prob_ = nullptr;
  const ParameterGram* gram_ = nullptr;
  std::vector<Eigen::MatrixXd> s_;     ///< per time: d_h -> delta u (full dofs)
  std::vector<Eigen::MatrixXd> t_;     ///< per time: ODE system matrix
  std::vector<Eigen::PartialPivLU<Eigen::MatrixXd>> glu_;  ///< LU of I - dt/2 T_m, m >= 1
  std::vector<Eigen::MatrixXd> bmat_;  ///< per time: nodes x coefficients basis values
  std::vector<Vec> bscale_;            ///< per time: (1-d)^{-alpha} nodal scale
  Vec wdiag_;                          ///< data Gram diagonal
};

}  // namespace damageid
