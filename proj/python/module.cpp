#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <random>

#include "damageid/config.hpp"
#include "damageid/data_io.hpp"

namespace py = pybind11;
using namespace damageid;

namespace {

py::dict forward_from_config(const std::string& text) {
  const ExperimentConfig cfg = parse_config(text);
  const Problem prob = cfg.build_problem();
  const StateTrajectory state = picard_forward_solve(prob, cfg.truth_process(), cfg.forward);
  py::list times, u, damage;
  for (int m = 0; m < prob.n_times(); ++m) {
    times.append(prob.grid.time(m));
    u.append(state.u[m]);
    damage.append(state.damage[m]);
  }
  py::dict out;
  out["times"] = times;
  out["nodes"] = prob.mesh.nodes;
  out["u"] = u;
  out["damage"] = damage;
  out["sweeps"] = state.sweeps;
  out["final_update"] = state.final_update;
  return out;
}

py::dict synthesize_from_config(const std::string& text) {
  const ExperimentConfig cfg = parse_config(text);
  const Problem prob = cfg.build_problem();
  const Measurement meas =
      synthesize_data(prob, cfg.truth_process(), cfg.forward, cfg.noise, cfg.seed);
  py::dict out;
  out["data"] = meas.data;
  out["delta"] = meas.delta;
  return out;
}

py::dict invert_from_config(const std::string& text) {
  const ExperimentConfig cfg = parse_config(text);
  const Problem prob = cfg.build_problem();
  const Measurement meas =
      synthesize_data(prob, cfg.truth_process(), cfg.forward, cfg.noise, cfg.seed);
  const ParameterGram gram(cfg.build_process_basis(), cfg.gram_s);
  const LandweberRecord rec =
      landweber_run(prob, cfg.initial_process(), gram, cfg.forward, meas, cfg.landweber);
  py::dict out;
  out["residuals"] = rec.residuals;
  out["coefficients"] = rec.iterates.back();
  out["truth_coefficients"] = cfg.truth_process().coeffs;
  out["stop_index"] = rec.stop_index;
  out["stopped_by_discrepancy"] = rec.stopped_by_discrepancy;
  out["delta"] = meas.delta;
  out["tau_disc"] = cfg.landweber.tau_disc;
  return out;
}

double adjoint_mismatch_from_config(const std::string& text, int trials) {
  const ExperimentConfig cfg = parse_config(text);
  const Problem prob = cfg.build_problem();
  const DamageProcess g = cfg.truth_process();
  const ParameterGram gram(cfg.build_process_basis(), cfg.gram_s);
  const StateTrajectory state = picard_forward_solve(prob, g, cfg.forward);
  const LinearizedOperator op(prob, g, state, gram);
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> gauss;
  double worst = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    Vec h(g.coeffs.size()), r(op.n_data());
    for (Eigen::Index i = 0; i < h.size(); ++i) h(i) = gauss(rng);
    for (Eigen::Index i = 0; i < r.size(); ++i) r(i) = gauss(rng);
    const Vec jh = op.apply(h);
    const double lhs = jh.dot(prob.data_gram_diagonal().cwiseProduct(r));
    const double rhs = gram.inner(h, op.apply_adjoint(r));
    worst = std::max(worst, std::abs(lhs - rhs) / (data_norm(prob, jh) * data_norm(prob, r)));
  }
  return worst;
}

std::vector<double> spectrum_from_config(const std::string& text, int k) {
  const ExperimentConfig cfg = parse_config(text);
  const Problem prob = cfg.build_problem();
  const DamageProcess g = cfg.truth_process();
  const ParameterGram gram(cfg.build_process_basis(), cfg.gram_s);
  const StateTrajectory state = picard_forward_solve(prob, g, cfg.forward);
  const LinearizedOperator op(prob, g, state, gram);
  return spectrum_probe(op, k);
}

}  // namespace

PYBIND11_MODULE(_damageid, m) {
  m.doc() = "damaged-elasticity forward solves and damage-process identification";
  m.def("check_config", [](const std::string& text) { return serialize_config(parse_config(text)); },
        py::arg("text"), "validate a configuration and return its effective values");
  m.def("forward", &forward_from_config, py::arg("config"),
        "solve the coupled forward problem for the configured truth process");
  m.def("synthesize", &synthesize_from_config, py::arg("config"),
        "generate (possibly noisy) synthetic displacement data");
  m.def("invert", &invert_from_config, py::arg("config"),
        "run the projected Landweber identification on synthetic data");
  m.def("adjoint_mismatch", &adjoint_mismatch_from_config, py::arg("config"),
        py::arg("trials") = 10, "max relative adjoint-identity mismatch over random pairs");
  m.def("spectrum", &spectrum_from_config, py::arg("config"), py::arg("k") = 5,
        "leading singular values of the linearized forward map");
  m.def("contraction", [](const std::string& text, double lam, int trials) {
          const ExperimentConfig cfg = parse_config(text);
          const Problem prob = cfg.build_problem();
          return contraction_estimate(prob, cfg.truth_process(), lam, trials,
                                      static_cast<unsigned>(cfg.seed));
        },
        py::arg("config"), py::arg("lam") = 8.0, py::arg("trials") = 3,
        "empirical two-sweep contraction factor in the weighted trajectory norm");
}
