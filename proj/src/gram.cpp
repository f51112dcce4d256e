#include "damageid/gram.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace damageid {

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

namespace {

struct AxisGram {
  Eigen::MatrixXd mass;
  Eigen::MatrixXd laplace;
};

/// Mass and graph-Laplace Grams of a piecewise-constant basis with n cells
/// of width h: mass = h I, laplace = (1/h) tridiag(-1, 2, -1) with Neumann
/// (value 1) diagonal ends. The constant vector is its exact kernel.
AxisGram piecewise_constant_axis(int n, double h) {
  AxisGram g;
  g.mass = h * Eigen::MatrixXd::Identity(n, n);
  g.laplace = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    g.laplace(i, i) = (i == 0 || i == n - 1) ? 1.0 : 2.0;
    if (i + 1 < n) {
      g.laplace(i, i + 1) = -1.0;
      g.laplace(i + 1, i) = -1.0;
    }
  }
  g.laplace /= h;
  if (n == 1) g.laplace.setZero();
  return g;
}

}  // namespace

ParameterGram::ParameterGram(const ProcessBasis& basis, double s) : s_(s) {
  basis.validate();
  if (s < 0.0) throw std::invalid_argument("parameter gram: s must be >= 0");

  std::vector<AxisGram> axes;
  axes.push_back(piecewise_constant_axis(basis.n_t, basis.horizon / basis.n_t));
  if (basis.dim == 2)
    axes.push_back(piecewise_constant_axis(basis.ny_cells, basis.ly / basis.ny_cells));
  axes.push_back(piecewise_constant_axis(basis.nx_cells, basis.lx / basis.nx_cells));
  axes.push_back({basis.ybasis.mass(), basis.ybasis.stiffness()});

  // per-axis joint diagonalization L v = lam M v with V^T M V = I
  Eigen::MatrixXd v_total(1, 1), b_total(1, 1);
  v_total(0, 0) = 1.0;
  b_total(0, 0) = 1.0;
  Eigen::VectorXd lam_total = Eigen::VectorXd::Zero(1);
  for (const AxisGram& ax : axes) {
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> eig(ax.laplace, ax.mass);
    if (eig.info() != Eigen::Success)
      throw std::runtime_error("parameter gram: axis eigendecomposition failed");
    const Eigen::Index n_old = lam_total.size(), n_ax = ax.mass.rows();
    // the constant mode has an exact zero eigenvalue; snap round-off to it
    const double snap = 1e-9 * std::max(1.0, eig.eigenvalues().maxCoeff());
    Eigen::VectorXd lam_new(n_old * n_ax);
    for (Eigen::Index i = 0; i < n_old; ++i)
      for (Eigen::Index j = 0; j < n_ax; ++j) {
        const double lam_ax = eig.eigenvalues()(j) < snap ? 0.0 : eig.eigenvalues()(j);
        lam_new(i * n_ax + j) = lam_total(i) + lam_ax;
      }
    v_total = kron(v_total, eig.eigenvectors());
    b_total = kron(b_total, ax.mass * eig.eigenvectors());
    lam_total = std::move(lam_new);
  }
  if (v_total.rows() != basis.size())
    throw std::runtime_error("parameter gram: axis ordering mismatch");

  modes_ = v_total;
  bmodes_ = b_total;  // M V = (V^T)^{-1}, assembled exactly per axis
  weights_ = (1.0 + lam_total.array()).pow(s);
  matrix_ = bmodes_ * weights_.asDiagonal() * bmodes_.transpose();
  matrix_ = ((matrix_ + matrix_.transpose()) / 2.0).eval();

  Eigen::LLT<Eigen::MatrixXd> llt(matrix_);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("parameter gram: assembled Gram is not positive definite");
}

Eigen::VectorXd ParameterGram::apply(const Eigen::VectorXd& x) const { return matrix_ * x; }

Eigen::VectorXd ParameterGram::solve(const Eigen::VectorXd& x) const {
  // M_s^{-1} = V diag(1/w) V^T
  return modes_ * (weights_.cwiseInverse().asDiagonal() * (modes_.transpose() * x));
}

Eigen::MatrixXd ParameterGram::factor() const {
  return bmodes_ * weights_.cwiseSqrt().asDiagonal();
}

Eigen::MatrixXd ParameterGram::inverse_factor() const {
  return modes_ * weights_.cwiseSqrt().cwiseInverse().asDiagonal();
}

double ParameterGram::inner(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
  return a.dot(matrix_ * b);
}

double ParameterGram::norm(const Eigen::VectorXd& a) const { return std::sqrt(inner(a, a)); }

}  // namespace damageid
