#include "damageid/mollifier.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace damageid {

void MollifierSpec::validate(const Mesh& mesh) const {
  const double span_x = mesh.hx * mesh.nx;
  if (radius < mesh.hx || (mesh.dim == 2 && radius < mesh.hy))
    throw std::invalid_argument("mollifier: radius below one mesh spacing");
  const double window = variant == Variant::kIndicatorAverage ? 2 * radius : radius;
  if (window > span_x || (mesh.dim == 2 && window > mesh.hy * mesh.ny))
    throw std::invalid_argument("mollifier: stencil window exceeds the domain");
}

namespace {

using WeightList = std::vector<std::pair<int, double>>;  // (line index, weight)

/// Linear interpolation of a nodal grid-line field at coordinate z.
WeightList point_weights(double z, double h, int n_cells) {
  const int k = std::clamp(static_cast<int>(std::floor(z / h)), 0, n_cells - 1);
  const double s = z / h - k;
  return {{k, 1.0 - s}, {k + 1, s}};
}

/// Exact average of a piecewise-linear grid-line field over [a, a + mu].
WeightList average_weights(double a, double mu, double h, int n_cells) {
  WeightList w;
  const double b = a + mu;
  int k = std::clamp(static_cast<int>(std::floor(a / h)), 0, n_cells - 1);
  for (; k < n_cells; ++k) {
    const double zl = k * h, zr = (k + 1) * h;
    const double p = std::max(a, zl), q = std::min(b, zr);
    if (q <= p) {
      if (zl >= b) break;
      continue;
    }
    const double smid = ((p + q) / 2 - zl) / h;
    w.emplace_back(k, (q - p) / mu * (1.0 - smid));
    w.emplace_back(k + 1, (q - p) / mu * smid);
  }
  return w;
}

/// Stencil along one grid line: weights of mu^{-1}(v(. + mu) - v) at
/// coordinate z, shifted inward where the window leaves [0, L].
WeightList stencil_weights(const MollifierSpec& spec, double z, double h, int n_cells) {
  const double mu = spec.radius;
  const double span = h * n_cells;
  WeightList w;
  if (spec.variant == MollifierSpec::Variant::kDifferenceQuotient) {
    const double a = std::clamp(z, 0.0, span - mu);
    for (auto [k, v] : point_weights(a + mu, h, n_cells)) w.emplace_back(k, v / mu);
    for (auto [k, v] : point_weights(a, h, n_cells)) w.emplace_back(k, -v / mu);
  } else {
    const double a = std::clamp(z, 0.0, span - 2 * mu);
    for (auto [k, v] : average_weights(a + mu, mu, h, n_cells)) w.emplace_back(k, v / mu);
    for (auto [k, v] : average_weights(a, mu, h, n_cells)) w.emplace_back(k, -v / mu);
  }
  return w;
}

}  // namespace

Eigen::SparseMatrix<double> mollifier_matrix(const MollifierSpec& spec, const Mesh& mesh) {
  spec.validate(mesh);
  const int dim = mesh.dim;
  std::vector<Eigen::Triplet<double>> trips;
  for (int node = 0; node < mesh.n_nodes(); ++node) {
    const int ix = dim == 1 ? node : node % (mesh.nx + 1);
    const int iy = dim == 1 ? 0 : node / (mesh.nx + 1);
    for (int j = 0; j < dim; ++j) {
      const double h = j == 0 ? mesh.hx : mesh.hy;
      const int n_cells = j == 0 ? mesh.nx : mesh.ny;
      const double z = (j == 0 ? ix : iy) * h;
      const auto weights = stencil_weights(spec, z, h, n_cells);
      for (int i = 0; i < dim; ++i) {
        const int row = node * dim * dim + i * dim + j;
        for (auto [k, wv] : weights) {
          const int other = j == 0 ? (dim == 1 ? k : iy * (mesh.nx + 1) + k)
                                   : k * (mesh.nx + 1) + ix;
          trips.emplace_back(row, other * dim + i, wv);
        }
      }
    }
  }
  Eigen::SparseMatrix<double> m(mesh.n_nodes() * dim * dim, mesh.n_dofs());
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

Eigen::MatrixXd mollified_gradient(const MollifierSpec& spec, const Mesh& mesh,
                                   const Eigen::VectorXd& u_full) {
  const int comps = mesh.dim * mesh.dim;
  const Eigen::VectorXd flat = mollifier_matrix(spec, mesh) * u_full;
  Eigen::MatrixXd out(mesh.n_nodes(), comps);
  for (int node = 0; node < mesh.n_nodes(); ++node)
    for (int c = 0; c < comps; ++c) out(node, c) = flat(node * comps + c);
  return out;
}

Eigen::VectorXd mollified_transpose(const MollifierSpec& spec, const Mesh& mesh,
                                    const Eigen::VectorXd& w) {
  return mollifier_matrix(spec, mesh).transpose() * w;
}

}  // namespace damageid
