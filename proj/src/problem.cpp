#include "damageid/problem.hpp"

#include <stdexcept>

namespace damageid {

Vec Problem::data_gram_diagonal() const {
  const int nd = mesh.n_dofs();
  Vec w(grid.n_times() * nd);
  for (int m = 0; m < grid.n_times(); ++m) {
    const double tw = (m == 0 || m == grid.n_steps) ? grid.dt() / 2.0 : grid.dt();
    w.segment(static_cast<Eigen::Index>(m) * nd, nd) = tw * lumped;
  }
  return w;
}

Problem build_problem(const DomainSpec& domain, const MaterialModel& material,
                      const TimeGrid& grid, const MollifierSpec& mollifier, const LoadSet& loads,
                      const Vec& d0) {
  Problem p;
  p.mesh = build_mesh(domain);
  material.validate(domain.dimension);
  grid.validate();
  p.material = material;
  p.grid = grid;
  p.mollifier = mollifier;
  p.moll_matrix = mollifier_matrix(mollifier, p.mesh);
  p.lumped = lumped_mass(p.mesh);

  if (static_cast<int>(loads.body.size()) != grid.n_times() ||
      static_cast<int>(loads.traction.size()) != grid.n_times())
    throw std::invalid_argument("problem: loads must cover every grid time");
  p.rhs.reserve(grid.n_times());
  for (int m = 0; m < grid.n_times(); ++m)
    p.rhs.push_back(assemble_load(p.mesh, loads.body[m], loads.traction[m]));

  if (d0.size() != p.mesh.n_nodes())
    throw std::invalid_argument("problem: initial damage size mismatch");
  for (Eigen::Index i = 0; i < d0.size(); ++i)
    if (d0(i) < 0.0 || d0(i) > material.omega0)
      throw std::invalid_argument("problem: initial damage outside [0, omega0]");
  p.d0 = d0;
  return p;
}

LoadSet constant_loads(const TimeGrid& grid, const Eigen::MatrixXd& body,
                       const Eigen::MatrixXd& traction) {
  LoadSet loads;
  loads.body.assign(grid.n_times(), body);
  loads.traction.assign(grid.n_times(), traction);
  return loads;
}

Vec flatten_trajectory(const std::vector<Vec>& traj) {
  if (traj.empty()) return Vec();
  const Eigen::Index nd = traj[0].size();
  Vec flat(static_cast<Eigen::Index>(traj.size()) * nd);
  for (size_t m = 0; m < traj.size(); ++m) flat.segment(static_cast<Eigen::Index>(m) * nd, nd) = traj[m];
  return flat;
}

std::vector<Vec> unflatten_trajectory(const Vec& flat, int n_times) {
  if (n_times < 1 || flat.size() % n_times != 0)
    throw std::invalid_argument("unflatten_trajectory: size not divisible by n_times");
  const Eigen::Index nd = flat.size() / n_times;
  std::vector<Vec> traj(n_times);
  for (int m = 0; m < n_times; ++m) traj[m] = flat.segment(static_cast<Eigen::Index>(m) * nd, nd);
  return traj;
}

}  // namespace damageid
