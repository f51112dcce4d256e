#include "damageid/bspline.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

namespace damageid {

BSplineBasis::BSplineBasis(double lo, double hi, int n) : lo_(lo), hi_(hi), n_(n) {
  if (!(hi > lo)) throw std::invalid_argument("bspline: empty interval");
  if (n < 4) throw std::invalid_argument("bspline: need at least 4 basis functions");
  knots_.resize(n + 4);
  const int n_spans = n - 3;
  for (int i = 0; i < 4; ++i) knots_[i] = lo;
  for (int k = 1; k < n_spans; ++k) knots_[3 + k] = lo + (hi - lo) * k / n_spans;
  for (int i = n; i < n + 4; ++i) knots_[i] = hi;
}

namespace {

// All basis values of degrees 0..max_deg at y via the Cox-de Boor recursion,
// with the 0/0 -> 0 convention. table[p] has knots.size()-1-p entries.
std::array<std::vector<double>, 4> deboor_table(const std::vector<double>& knots, double y) {
  std::array<std::vector<double>, 4> table;
  const int m = static_cast<int>(knots.size()) - 1;
  table[0].assign(m, 0.0);
  for (int i = 0; i < m; ++i) {
    const bool last_span = knots[i] < knots[i + 1] && knots[i + 1] == knots[m];
    if ((y >= knots[i] && y < knots[i + 1]) || (last_span && y == knots[i + 1]))
      table[0][i] = 1.0;
  }
  for (int p = 1; p <= 3; ++p) {
    table[p].assign(m - p, 0.0);
    for (int i = 0; i < m - p; ++i) {
      double v = 0.0;
      const double den_l = knots[i + p] - knots[i];
      const double den_r = knots[i + p + 1] - knots[i + 1];
      if (den_l > 0.0) v += (y - knots[i]) / den_l * table[p - 1][i];
      if (den_r > 0.0) v += (knots[i + p + 1] - y) / den_r * table[p - 1][i + 1];
      table[p][i] = v;
    }
  }
  return table;
}

}  // namespace

Eigen::VectorXd BSplineBasis::eval(double y) const {
  y = std::clamp(y, lo_, hi_);
  const auto table = deboor_table(knots_, y);
  return Eigen::Map<const Eigen::VectorXd>(table[3].data(), n_);
}

Eigen::VectorXd BSplineBasis::eval_deriv(double y) const {
  if (y < lo_ || y > hi_) return Eigen::VectorXd::Zero(n_);
  const auto table = deboor_table(knots_, y);
  Eigen::VectorXd out(n_);
  for (int i = 0; i < n_; ++i) {
    double v = 0.0;
    const double den_l = knots_[i + 3] - knots_[i];
    const double den_r = knots_[i + 4] - knots_[i + 1];
    if (den_l > 0.0) v += 3.0 / den_l * table[2][i];
    if (den_r > 0.0) v -= 3.0 / den_r * table[2][i + 1];
    out(i) = v;
  }
  return out;
}

namespace {

// 4-point Gauss-Legendre on [-1, 1]; exact through degree 7, enough for
// products of cubics.
constexpr double kGx[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                           0.8611363115940526};
constexpr double kGw[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                           0.3478548451374538};

}  // namespace

Eigen::MatrixXd BSplineBasis::mass() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n_, n_);
  for (size_t s = 0; s + 1 < knots_.size(); ++s) {
    const double a = knots_[s], b = knots_[s + 1];
    if (!(b > a)) continue;
    for (int q = 0; q < 4; ++q) {
      const double y = a + (kGx[q] + 1) / 2 * (b - a);
      const Eigen::VectorXd v = eval(y);
      m += kGw[q] * (b - a) / 2 * v * v.transpose();
    }
  }
  return m;
}

Eigen::MatrixXd BSplineBasis::stiffness() const {
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n_, n_);
  for (size_t s = 0; s + 1 < knots_.size(); ++s) {
    const double a = knots_[s], b = knots_[s + 1];
    if (!(b > a)) continue;
    for (int q = 0; q < 4; ++q) {
      const double y = a + (kGx[q] + 1) / 2 * (b - a);
      const Eigen::VectorXd v = eval_deriv(y);
      k += kGw[q] * (b - a) / 2 * v * v.transpose();
    }
  }
  return k;
}

}  // namespace damageid
