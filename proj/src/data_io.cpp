#include "damageid/data_io.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace damageid {

Measurement synthesize_data(const Problem& prob, const DamageProcess& g_true,
                            const ForwardConfig& fwd, double noise_fraction,
                            std::uint64_t seed) {
  if (noise_fraction < 0.0)
    throw std::invalid_argument("synthesize_data: noise fraction must be >= 0");
  Measurement meas;
  meas.data = forward_operator(prob, g_true, fwd);
  if (noise_fraction == 0.0) return meas;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Vec noise(meas.data.size());
  for (Eigen::Index i = 0; i < noise.size(); ++i) noise(i) = gauss(rng);
  const double noise_norm = data_norm(prob, noise);
  if (noise_norm == 0.0) throw std::runtime_error("synthesize_data: degenerate noise draw");
  meas.delta = noise_fraction * data_norm(prob, meas.data);
  meas.data += (meas.delta / noise_norm) * noise;
  return meas;
}

namespace {

std::ostringstream make_stream() {
  std::ostringstream out;
  out.precision(17);
  return out;
}

std::string hash_footer(std::uint64_t config_hash) {
  std::ostringstream out;
  out << "# config-hash = " << std::hex << config_hash << "\n";
  return out.str();
}

}  // namespace

std::string state_table(const Problem& prob, const StateTrajectory& state,
                        std::uint64_t config_hash) {
  auto out = make_stream();
  const Mesh& mesh = prob.mesh;
  out << (mesh.dim == 1 ? "t,x,u_x,d" : "t,x,y,u_x,u_y,d") << "\n";
  for (int m = 0; m < prob.n_times(); ++m)
    for (int n = 0; n < mesh.n_nodes(); ++n) {
      out << prob.grid.time(m) << ',' << mesh.nodes(n, 0);
      if (mesh.dim == 2) out << ',' << mesh.nodes(n, 1);
      for (int c = 0; c < mesh.dim; ++c) out << ',' << state.u[m](n * mesh.dim + c);
      out << ',' << state.damage[m](n) << "\n";
    }
  out << hash_footer(config_hash);
  return out.str();
}

std::string process_table(const DamageProcess& p, std::uint64_t config_hash) {
  auto out = make_stream();
  out << "i_t,i_x,i_y,coeff\n";
  for (int tc = 0; tc < p.basis.n_t; ++tc)
    for (int sc = 0; sc < p.basis.n_space(); ++sc)
      for (int j = 0; j < p.basis.n_y(); ++j)
        out << tc << ',' << sc << ',' << j << ','
            << p.coeffs(p.basis.coeff_index(tc, sc, j)) << "\n";
  out << hash_footer(config_hash);
  return out.str();
}

std::string measurement_table(const Problem& prob, const Measurement& meas,
                              std::uint64_t config_hash) {
  auto out = make_stream();
  const int nd = prob.mesh.n_dofs();
  if (meas.data.size() != static_cast<Eigen::Index>(prob.n_times()) * nd)
    throw std::invalid_argument("measurement_table: data layout mismatch");
  out << "m,dof,value\n";
  for (int m = 0; m < prob.n_times(); ++m)
    for (int dof = 0; dof < nd; ++dof)
      out << m << ',' << dof << ',' << meas.data(static_cast<Eigen::Index>(m) * nd + dof)
          << "\n";
  out << "# delta = " << meas.delta << "\n" << hash_footer(config_hash);
  return out.str();
}

std::string iterate_table(const LandweberRecord& rec, const ParameterGram& gram,
                          std::uint64_t config_hash) {
  auto out = make_stream();
  out << "iter,residual_L2,grad_norm_Ms,step,cone_sample_max,wallclock_s\n";
  for (size_t k = 0; k < rec.residuals.size(); ++k) {
    // recover the gradient norm from successive iterates; zero for the last
    const double grad_norm =
        (k + 1 < rec.iterates.size() && rec.step_used > 0.0)
            ? gram.norm(rec.iterates[k + 1] - rec.iterates[k]) / rec.step_used
            : 0.0;
    const double wall = k < rec.wallclock.size() ? rec.wallclock[k] : 0.0;
    out << k << ',' << rec.residuals[k] << ',' << grad_norm << ',' << rec.step_used << ",0,"
        << wall << "\n";
  }
  out << hash_footer(config_hash);
  return out.str();
}

Measurement read_measurement(const Problem& prob, const std::string& text) {
  Measurement meas;
  const Eigen::Index nd = prob.mesh.n_dofs();
  meas.data = Vec::Zero(static_cast<Eigen::Index>(prob.n_times()) * nd);
  Vec seen = Vec::Zero(meas.data.size());
  std::istringstream in(text);
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.front() == '#') {
      const auto pos = line.find("delta =");
      if (pos != std::string::npos) meas.delta = std::stod(line.substr(pos + 7));
      continue;
    }
    if (!header_seen) {
      if (line != "m,dof,value")
        throw std::invalid_argument("read_measurement: unexpected header '" + line + "'");
      header_seen = true;
      continue;
    }
    std::istringstream row(line);
    long long m, dof;
    double value;
    char c1, c2;
    if (!(row >> m >> c1 >> dof >> c2 >> value) || c1 != ',' || c2 != ',')
      throw std::invalid_argument("read_measurement: malformed row '" + line + "'");
    const Eigen::Index idx = m * nd + dof;
    if (m < 0 || dof < 0 || dof >= nd || idx >= meas.data.size())
      throw std::invalid_argument("read_measurement: index out of range in '" + line + "'");
    meas.data(idx) = value;
    seen(idx) = 1.0;
  }
  if (!header_seen) throw std::invalid_argument("read_measurement: empty document");
  if (seen.minCoeff() == 0.0)
    throw std::invalid_argument("read_measurement: incomplete sample coverage");
  return meas;
}

}  // namespace damageid
