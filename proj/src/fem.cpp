#include "damageid/fem.hpp"

#include <cmath>
#include <stdexcept>

namespace damageid {

double MaterialModel::g_max() const {
  return (omega1 - omega0) * std::pow(1.0 - omega1, alpha) / horizon;
}

void MaterialModel::validate(int dim) const {
  if (alpha < 1.0) throw std::invalid_argument("material.alpha must be >= 1");
  if (!(0.0 <= omega0 && omega0 <= omega1 && omega1 < 1.0))
    throw std::invalid_argument("material bounds must satisfy 0 <= omega0 <= omega1 < 1");
  if (ybar <= 0.0) throw std::invalid_argument("material.ybar must be positive");
  if (horizon <= 0.0) throw std::invalid_argument("material.horizon must be positive");
  if (dim != 1 && dim != 2) throw std::invalid_argument("material: unsupported dimension");
}

namespace {

constexpr double kGauss = 0.57735026918962576451;  // 1/sqrt(3)

struct QuadPoint {
  double weight;           // includes Jacobian determinant
  Eigen::VectorXd shape;   // n_en
  Eigen::MatrixXd bmat;    // voigt x (n_en*dim)
  Eigen::VectorXd coords;  // physical coordinates
};

// Quadrature data for one element. 1d segments use 2-point Gauss, quads 2x2.
std::vector<QuadPoint> element_quadrature(const Mesh& mesh, int e) {
  std::vector<QuadPoint> qps;
  if (mesh.dim == 1) {
    const int a = mesh.elems(e, 0), b = mesh.elems(e, 1);
    const double xa = mesh.nodes(a, 0), xb = mesh.nodes(b, 0);
    const double h = xb - xa;
    if (h <= 0.0) throw std::runtime_error("fem: nonpositive element Jacobian");
    for (double xi : {-kGauss, kGauss}) {
      QuadPoint qp;
      qp.weight = h / 2.0;
      qp.shape = Eigen::Vector2d((1 - xi) / 2, (1 + xi) / 2);
      qp.bmat = Eigen::MatrixXd(1, 2);
      qp.bmat << -1.0 / h, 1.0 / h;
      qp.coords = Eigen::VectorXd::Constant(1, xa + (xi + 1) / 2 * h);
      qps.push_back(std::move(qp));
    }
    return qps;
  }
  // bilinear quad on a structured rectangle; local nodes bl, br, tr, tl
  const double hx = mesh.hx, hy = mesh.hy;
  if (hx <= 0.0 || hy <= 0.0) throw std::runtime_error("fem: nonpositive element Jacobian");
  const double x0 = mesh.nodes(mesh.elems(e, 0), 0);
  const double y0 = mesh.nodes(mesh.elems(e, 0), 1);
  const double lx[4] = {-1, 1, 1, -1};
  const double ly[4] = {-1, -1, 1, 1};
  for (double xi : {-kGauss, kGauss})
    for (double eta : {-kGauss, kGauss}) {
      QuadPoint qp;
      qp.weight = hx * hy / 4.0;
      qp.shape.resize(4);
      Eigen::MatrixXd dphys(2, 4);  // physical-gradient of shape functions
      for (int i = 0; i < 4; ++i) {
        qp.shape(i) = (1 + lx[i] * xi) * (1 + ly[i] * eta) / 4.0;
        dphys(0, i) = lx[i] * (1 + ly[i] * eta) / 4.0 * 2.0 / hx;
        dphys(1, i) = ly[i] * (1 + lx[i] * xi) / 4.0 * 2.0 / hy;
      }
      qp.bmat = Eigen::MatrixXd::Zero(3, 8);
      for (int i = 0; i < 4; ++i) {
        qp.bmat(0, 2 * i) = dphys(0, i);
        qp.bmat(1, 2 * i + 1) = dphys(1, i);
        qp.bmat(2, 2 * i) = dphys(1, i);
        qp.bmat(2, 2 * i + 1) = dphys(0, i);
      }
      qp.coords = Eigen::Vector2d(x0 + (xi + 1) / 2 * hx, y0 + (eta + 1) / 2 * hy);
      qps.push_back(std::move(qp));
    }
  return qps;
}

Eigen::MatrixXd material_matrix(const Mesh& mesh, const MaterialModel& mat,
                                const Eigen::VectorXd& x) {
  if (mesh.dim == 1) {
    Eigen::MatrixXd d(1, 1);
    d(0, 0) = mat.young(x(0), 0.0);
    return d;
  }
  const double la = mat.lame_lambda(x(0), x(1));
  const double mu = mat.lame_mu(x(0), x(1));
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(3, 3);
  d(0, 0) = d(1, 1) = la + 2 * mu;
  d(0, 1) = d(1, 0) = la;
  d(2, 2) = mu;
  return d;
}

void check_damage_bounds(const MaterialModel& mat, const Vec& d) {
  for (Eigen::Index i = 0; i < d.size(); ++i)
    if (!(d(i) >= 0.0 && d(i) <= mat.omega1))
      throw std::domain_error("stiffness assembly: damage out of [0, omega1]");
}

template <typename EntryFn>
void for_each_stiffness_entry(const Mesh& mesh, const MaterialModel& mat, const Vec& d,
                              EntryFn&& emit) {
  const int dim = mesh.dim;
  const int n_en = dim == 1 ? 2 : 4;
  for (int e = 0; e < mesh.n_elems(); ++e) {
    for (const QuadPoint& qp : element_quadrature(mesh, e)) {
      double dq = 0.0;
      for (int i = 0; i < n_en; ++i) dq += qp.shape(i) * d(mesh.elems(e, i));
      const Eigen::MatrixXd dmat = material_matrix(mesh, mat, qp.coords);
      const Eigen::MatrixXd ke = qp.weight * (1.0 - dq) * qp.bmat.transpose() * dmat * qp.bmat;
      for (int i = 0; i < n_en * dim; ++i)
        for (int j = 0; j < n_en * dim; ++j) {
          const int gi = mesh.elems(e, i / dim) * dim + i % dim;
          const int gj = mesh.elems(e, j / dim) * dim + j % dim;
          emit(gi, gj, ke(i, j));
        }
    }
  }
}

}  // namespace

SpMat assemble_stiffness(const Mesh& mesh, const MaterialModel& mat, const Vec& d) {
  check_damage_bounds(mat, d);
  std::vector<Eigen::Triplet<double>> trips;
  for_each_stiffness_entry(mesh, mat, d, [&](int gi, int gj, double v) {
    const int fi = mesh.free_of_full[gi], fj = mesh.free_of_full[gj];
    if (fi >= 0 && fj >= 0) trips.emplace_back(fi, fj, v);
  });
  SpMat k(mesh.n_free(), mesh.n_free());
  k.setFromTriplets(trips.begin(), trips.end());
  return k;
}

SpMat assemble_stiffness_full(const Mesh& mesh, const MaterialModel& mat, const Vec& d) {
  check_damage_bounds(mat, d);
  std::vector<Eigen::Triplet<double>> trips;
  for_each_stiffness_entry(mesh, mat, d,
                           [&](int gi, int gj, double v) { trips.emplace_back(gi, gj, v); });
  SpMat k(mesh.n_dofs(), mesh.n_dofs());
  k.setFromTriplets(trips.begin(), trips.end());
  return k;
}

SpMat assemble_weighted_pairing(const Mesh& mesh, const MaterialModel& mat, const Vec& u_full) {
  const int dim = mesh.dim;
  const int n_en = dim == 1 ? 2 : 4;
  std::vector<Eigen::Triplet<double>> trips;
  Eigen::VectorXd ue(n_en * dim);
  for (int e = 0; e < mesh.n_elems(); ++e) {
    for (int i = 0; i < n_en * dim; ++i) ue(i) = u_full(mesh.elems(e, i / dim) * dim + i % dim);
    for (const QuadPoint& qp : element_quadrature(mesh, e)) {
      const Eigen::MatrixXd dmat = material_matrix(mesh, mat, qp.coords);
      const Eigen::VectorXd sigma_u = dmat * (qp.bmat * ue);  // undamaged stress of u
      const Eigen::VectorXd col = qp.bmat.transpose() * sigma_u;
      for (int i = 0; i < n_en * dim; ++i) {
        const int fi = mesh.free_of_full[mesh.elems(e, i / dim) * dim + i % dim];
        if (fi < 0) continue;
        for (int j = 0; j < n_en; ++j)
          trips.emplace_back(fi, mesh.elems(e, j), qp.weight * qp.shape(j) * col(i));
      }
    }
  }
  SpMat c(mesh.n_free(), mesh.n_nodes());
  c.setFromTriplets(trips.begin(), trips.end());
  return c;
}

Vec lumped_mass(const Mesh& mesh) {
  const int dim = mesh.dim;
  const int n_en = dim == 1 ? 2 : 4;
  Vec m = Vec::Zero(mesh.n_dofs());
  for (int e = 0; e < mesh.n_elems(); ++e)
    for (const QuadPoint& qp : element_quadrature(mesh, e))
      for (int i = 0; i < n_en; ++i)
        for (int c = 0; c < dim; ++c)
          m(mesh.elems(e, i) * dim + c) += qp.weight * qp.shape(i);
  return m;
}

Vec assemble_load(const Mesh& mesh, const Eigen::MatrixXd& body, const Eigen::MatrixXd& traction) {
  const int dim = mesh.dim;
  const int n_en = dim == 1 ? 2 : 4;
  Vec f = Vec::Zero(mesh.n_dofs());
  // body force, consistent with nodal interpolation of the field
  for (int e = 0; e < mesh.n_elems(); ++e)
    for (const QuadPoint& qp : element_quadrature(mesh, e))
      for (int c = 0; c < dim; ++c) {
        double fq = 0.0;
        for (int j = 0; j < n_en; ++j) fq += qp.shape(j) * body(mesh.elems(e, j), c);
        for (int i = 0; i < n_en; ++i)
          f(mesh.elems(e, i) * dim + c) += qp.weight * qp.shape(i) * fq;
      }
  // traction on Gamma1
  for (const auto& face : mesh.gamma1_faces) {
    if (face[1] < 0) {  // 1d endpoint, unit cross-section
      f(face[0]) += traction(face[0], 0);
      continue;
    }
    const double len = (mesh.nodes.row(face[1]) - mesh.nodes.row(face[0])).norm();
    for (int c = 0; c < dim; ++c) {
      const double ta = traction(face[0], c), tb = traction(face[1], c);
      f(face[0] * dim + c) += len / 6.0 * (2 * ta + tb);
      f(face[1] * dim + c) += len / 6.0 * (ta + 2 * tb);
    }
  }
  return restrict_full(mesh, f);
}

StiffnessFactor::StiffnessFactor(const Mesh& mesh, const MaterialModel& mat, const Vec& d)
    : mesh_(&mesh) {
  ldlt_.compute(assemble_stiffness(mesh, mat, d));
  if (ldlt_.info() != Eigen::Success)
    throw std::runtime_error("equilibrium: stiffness factorization failed");
}

Vec StiffnessFactor::solve_free(const Vec& rhs_free) const { return ldlt_.solve(rhs_free); }

Vec StiffnessFactor::solve_to_full(const Vec& rhs_free) const {
  return scatter_free(*mesh_, ldlt_.solve(rhs_free));
}

Vec solve_equilibrium(const Mesh& mesh, const MaterialModel& mat, const Vec& d,
                      const Vec& rhs_free) {
  return StiffnessFactor(mesh, mat, d).solve_to_full(rhs_free);
}

StrainStress strain_stress(const Mesh& mesh, const MaterialModel& mat, const Vec& d,
                           const Vec& u_full) {
  const int dim = mesh.dim;
  const int n_en = dim == 1 ? 2 : 4;
  const int nv = dim == 1 ? 1 : 3;
  StrainStress out;
  std::vector<Eigen::VectorXd> pts, eps, sig;
  Eigen::VectorXd ue(n_en * dim);
  for (int e = 0; e < mesh.n_elems(); ++e) {
    for (int i = 0; i < n_en * dim; ++i) ue(i) = u_full(mesh.elems(e, i / dim) * dim + i % dim);
    for (const QuadPoint& qp : element_quadrature(mesh, e)) {
      double dq = 0.0;
      for (int i = 0; i < n_en; ++i) dq += qp.shape(i) * d(mesh.elems(e, i));
      const Eigen::VectorXd strain = qp.bmat * ue;
      const Eigen::VectorXd stress =
          (1.0 - dq) * (material_matrix(mesh, mat, qp.coords) * strain);
      pts.push_back(qp.coords);
      eps.push_back(strain);
      sig.push_back(stress);
    }
  }
  out.points.resize(static_cast<Eigen::Index>(pts.size()), dim);
  out.strain.resize(static_cast<Eigen::Index>(pts.size()), nv);
  out.stress.resize(static_cast<Eigen::Index>(pts.size()), nv);
  for (size_t i = 0; i < pts.size(); ++i) {
    out.points.row(static_cast<Eigen::Index>(i)) = pts[i].transpose();
    out.strain.row(static_cast<Eigen::Index>(i)) = eps[i].transpose();
    out.stress.row(static_cast<Eigen::Index>(i)) = sig[i].transpose();
  }
  return out;
}

Vec scatter_free(const Mesh& mesh, const Vec& free_vec) {
  Vec full = Vec::Zero(mesh.n_dofs());
  for (int i = 0; i < mesh.n_free(); ++i) full(mesh.full_of_free[i]) = free_vec(i);
  return full;
}

Vec restrict_full(const Mesh& mesh, const Vec& full_vec) {
  Vec out(mesh.n_free());
  for (int i = 0; i < mesh.n_free(); ++i) out(i) = full_vec(mesh.full_of_free[i]);
  return out;
}

}  // namespace damageid
