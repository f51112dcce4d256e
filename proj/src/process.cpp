#include "damageid/process.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace damageid {

void ProcessBasis::validate() const {
  if (horizon <= 0.0) throw std::invalid_argument("process: horizon must be positive");
  if (n_t < 1 || nx_cells < 1 || (dim == 2 && ny_cells < 1))
    throw std::invalid_argument("process: at least one cell per axis required");
  if (dim != 1 && dim != 2) throw std::invalid_argument("process: unsupported dimension");
  if (lx <= 0.0 || (dim == 2 && ly <= 0.0))
    throw std::invalid_argument("process: spatial extents must be positive");
  if (ybasis.size() < 4) throw std::invalid_argument("process: strain-argument basis unset");
}

int ProcessBasis::time_cell(double t) const {
  return std::clamp(static_cast<int>(std::floor(t / horizon * n_t)), 0, n_t - 1);
}

int ProcessBasis::space_cell(double px, double py) const {
  const int cx = std::clamp(static_cast<int>(std::floor(px / lx * nx_cells)), 0, nx_cells - 1);
  if (dim == 1) return cx;
  const int cy = std::clamp(static_cast<int>(std::floor(py / ly * ny_cells)), 0, ny_cells - 1);
  return cy * nx_cells + cx;
}

double DamageProcess::eval(double t, double px, double py, double y) const {
  const int tc = basis.time_cell(t);
  const int sc = basis.space_cell(px, py);
  const Eigen::VectorXd b = basis.ybasis.eval(y);
  double v = 0.0;
  for (int j = 0; j < basis.n_y(); ++j) v += coeffs(basis.coeff_index(tc, sc, j)) * b(j);
  return v;
}

double DamageProcess::eval_dy(double t, double px, double py, double y) const {
  const int tc = basis.time_cell(t);
  const int sc = basis.space_cell(px, py);
  const Eigen::VectorXd b = basis.ybasis.eval_deriv(y);
  double v = 0.0;
  for (int j = 0; j < basis.n_y(); ++j) v += coeffs(basis.coeff_index(tc, sc, j)) * b(j);
  return v;
}

Eigen::VectorXd apply_nemytskii(const DamageProcess& p, double t, const Mesh& mesh,
                                const Eigen::VectorXd& y_field) {
  Eigen::VectorXd out(mesh.n_nodes());
  for (int n = 0; n < mesh.n_nodes(); ++n)
    out(n) = p.eval(t, mesh.nodes(n, 0), mesh.dim == 2 ? mesh.nodes(n, 1) : 0.0, y_field(n));
  return out;
}

Eigen::VectorXd apply_nemytskii_dy(const DamageProcess& p, double t, const Mesh& mesh,
                                   const Eigen::VectorXd& y_field) {
  Eigen::VectorXd out(mesh.n_nodes());
  for (int n = 0; n < mesh.n_nodes(); ++n)
    out(n) = p.eval_dy(t, mesh.nodes(n, 0), mesh.dim == 2 ? mesh.nodes(n, 1) : 0.0, y_field(n));
  return out;
}

Eigen::MatrixXd basis_matrix(const ProcessBasis& basis, double t, const Mesh& mesh,
                             const Eigen::VectorXd& y_field) {
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(mesh.n_nodes(), basis.size());
  const int tc = basis.time_cell(t);
  for (int n = 0; n < mesh.n_nodes(); ++n) {
    const int sc =
        basis.space_cell(mesh.nodes(n, 0), mesh.dim == 2 ? mesh.nodes(n, 1) : 0.0);
    const Eigen::VectorXd row = basis.ybasis.eval(y_field(n));
    for (int j = 0; j < basis.n_y(); ++j) b(n, basis.coeff_index(tc, sc, j)) = row(j);
  }
  return b;
}

DamageProcess project_admissible(DamageProcess p) {
  for (Eigen::Index i = 0; i < p.coeffs.size(); ++i)
    p.coeffs(i) = std::clamp(p.coeffs(i), 0.0, p.g_max);
  return p;
}

double gradient_feature(const Eigen::VectorXd& grad_comps, int dim) {
  if (dim == 1) return grad_comps(0);
  // Frobenius norm of the symmetric part of the 2x2 gradient
  const double e11 = grad_comps(0);
  const double e12 = (grad_comps(1) + grad_comps(2)) / 2.0;
  const double e22 = grad_comps(3);
  return std::sqrt(e11 * e11 + 2 * e12 * e12 + e22 * e22);
}

Eigen::VectorXd gradient_feature_deriv(const Eigen::VectorXd& grad_comps, int dim) {
  if (dim == 1) return Eigen::VectorXd::Ones(1);
  const double norm = gradient_feature(grad_comps, dim);
  Eigen::VectorXd d = Eigen::VectorXd::Zero(4);
  if (norm == 0.0) return d;
  const double e12 = (grad_comps(1) + grad_comps(2)) / 2.0;
  d(0) = grad_comps(0) / norm;
  d(1) = e12 / norm;
  d(2) = e12 / norm;
  d(3) = grad_comps(3) / norm;
  return d;
}

Eigen::VectorXd feature_field(const Eigen::MatrixXd& grad, int dim) {
  Eigen::VectorXd out(grad.rows());
  for (Eigen::Index n = 0; n < grad.rows(); ++n)
    out(n) = gradient_feature(grad.row(n).transpose(), dim);
  return out;
}

Eigen::MatrixXd feature_field_deriv(const Eigen::MatrixXd& grad, int dim) {
  Eigen::MatrixXd out(grad.rows(), grad.cols());
  for (Eigen::Index n = 0; n < grad.rows(); ++n)
    out.row(n) = gradient_feature_deriv(grad.row(n).transpose(), dim).transpose();
  return out;
}

}  // namespace damageid
