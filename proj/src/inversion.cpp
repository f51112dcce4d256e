#include "damageid/inversion.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <stdexcept>

namespace damageid {

bool discrepancy_stop(double residual_norm, double delta, double tau_disc) {
  if (delta < 0.0) throw std::invalid_argument("discrepancy_stop: delta must be >= 0");
  const double threshold = delta > 0.0 ? tau_disc * delta : 1e-10;
  return residual_norm <= threshold;
}

double data_norm(const Problem& prob, const Vec& r) {
  return std::sqrt(r.dot(prob.data_gram_diagonal().cwiseProduct(r)));
}

std::vector<double> spectrum_probe(const LinearizedOperator& op, int k, int max_iters,
                                   unsigned seed) {
  const int n = op.n_param();
  if (k < 1 || k > n) throw std::invalid_argument("spectrum_probe: k out of range");
  const ParameterGram& gram = op.gram();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;

  std::vector<Vec> basis;  // converged M_s-orthonormal singular directions
  std::vector<double> sigmas;
  for (int j = 0; j < k; ++j) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v(i) = gauss(rng);
    double value = 0.0;
    for (int it = 0; it < max_iters; ++it) {
      for (const Vec& b : basis) v -= gram.inner(b, v) * b;
      const double nrm = gram.norm(v);
      if (nrm == 0.0) break;
      v /= nrm;
      const Vec w = op.apply_adjoint(op.apply(v));  // M_s^{-1} J^T W J v
      const double next = gram.inner(v, w);
      const bool settled = std::abs(next - value) <= 1e-12 * std::max(1.0, std::abs(next));
      value = next;
      v = w;
      if (settled) break;
    }
    const double nrm = gram.norm(v);
    if (nrm > 0.0) basis.push_back(v / nrm);
    sigmas.push_back(std::sqrt(std::max(value, 0.0)));
  }
  std::sort(sigmas.rbegin(), sigmas.rend());
  return sigmas;
}

namespace {

double auto_step(const Problem& prob, const DamageProcess& g0, const ParameterGram& gram,
                 const ForwardConfig& fwd) {
  const StateTrajectory state = picard_forward_solve(prob, g0, fwd);
  const LinearizedOperator op(prob, g0, state, gram);
  const double sigma1 = spectrum_probe(op, 1).front();
  if (sigma1 <= 0.0) throw std::runtime_error("landweber: vanishing operator norm estimate");
  // the margin below the classical 1/sigma1^2 bound absorbs the growth of the
  // operator norm along the nonlinear iteration path
  return 0.4 / (sigma1 * sigma1);
}

}  // namespace

LandweberRecord landweber_run(const Problem& prob, const DamageProcess& g0,
                              const ParameterGram& gram, const ForwardConfig& fwd,
                              const Measurement& meas, const LandweberConfig& cfg) {
  if (cfg.tau_disc <= 1.0) throw std::invalid_argument("landweber: tau_disc must exceed 1");
  LandweberRecord rec;
  rec.step_used = cfg.step > 0.0 ? cfg.step : auto_step(prob, g0, gram, fwd);

  const Vec wdiag = prob.data_gram_diagonal();
  const auto start = std::chrono::steady_clock::now();
  DamageProcess g = project_admissible(g0);
  for (int k = 0; k <= cfg.max_iters; ++k) {
    StateTrajectory state;
    try {
      state = picard_forward_solve(prob, g, fwd);
    } catch (const std::exception& ex) {
      rec.abort_reason = ex.what();
      break;
    }
    const Vec r = meas.data - flatten_trajectory(state.u);
    const double res = std::sqrt(r.dot(wdiag.cwiseProduct(r)));
    rec.iterates.push_back(g.coeffs);
    rec.residuals.push_back(res);
    rec.wallclock.push_back(
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    rec.stop_index = k;
    if (k >= 1 && k <= 5 && res > rec.residuals.front()) rec.step_warning = true;
    if (cfg.stop_on_discrepancy && discrepancy_stop(res, meas.delta, cfg.tau_disc)) {
      rec.stopped_by_discrepancy = true;
      break;
    }
    if (k == cfg.max_iters) break;

    const LinearizedOperator op(prob, g, state, gram);
    const Vec grad = op.apply_adjoint(r);
    if (!grad.allFinite()) {
      rec.abort_reason = "non-finite gradient";
      break;
    }
    g.coeffs += rec.step_used * grad;
    g = project_admissible(g);
  }
  return rec;
}

ConeReport cone_constant_estimate(const Problem& prob, const DamageProcess& g,
                                  const ParameterGram& gram, const ForwardConfig& fwd,
                                  int trials, double scale, unsigned seed) {
  if (trials < 1) throw std::invalid_argument("cone estimate: trials must be >= 1");
  if (scale <= 0.0) throw std::invalid_argument("cone estimate: scale must be positive");
  const StateTrajectory state = picard_forward_solve(prob, g, fwd);
  const LinearizedOperator op(prob, g, state, gram);
  const Vec phi_g = flatten_trajectory(state.u);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  ConeReport report;
  for (int trial = 0; trial < trials; ++trial) {
    Vec h(g.coeffs.size());
    for (Eigen::Index i = 0; i < h.size(); ++i) h(i) = gauss(rng);
    h *= scale / gram.norm(h);
    DamageProcess g_plus = g;
    g_plus.coeffs += h;
    g_plus = project_admissible(g_plus);
    h = g_plus.coeffs - g.coeffs;  // effective (projected) perturbation
    const double h_norm = gram.norm(h);
    if (h_norm == 0.0) {
      ++report.skipped;
      continue;
    }
    const Vec secant = forward_operator(prob, g_plus, fwd) - phi_g;
    const double secant_norm = data_norm(prob, secant);
    if (secant_norm == 0.0) {
      ++report.skipped;
      continue;
    }
    ConeSample sample;
    sample.h_norm = h_norm;
    sample.ratio = data_norm(prob, secant - op.apply(h)) / (h_norm * secant_norm);
    sample.eta = sample.ratio * h_norm;
    report.max_ratio = std::max(report.max_ratio, sample.ratio);
    report.max_eta = std::max(report.max_eta, sample.eta);
    report.samples.push_back(sample);
  }
  return report;
}

SemiconvergenceReport semiconvergence_probe(const Problem& prob, const DamageProcess& g0,
                                            const DamageProcess& g_ref,
                                            const ParameterGram& gram, const ForwardConfig& fwd,
                                            const Measurement& meas, LandweberConfig cfg) {
  cfg.stop_on_discrepancy = false;
  const LandweberRecord rec = landweber_run(prob, g0, gram, fwd, meas, cfg);
  SemiconvergenceReport report;
  report.residuals = rec.residuals;
  report.stop_index = -1;
  for (size_t k = 0; k < rec.iterates.size(); ++k) {
    report.errors.push_back(gram.norm(rec.iterates[k] - g_ref.coeffs));
    if (report.stop_index < 0 &&
        discrepancy_stop(rec.residuals[k], meas.delta, cfg.tau_disc))
      report.stop_index = static_cast<int>(k);
  }
  report.min_index = static_cast<int>(
      std::min_element(report.errors.begin(), report.errors.end()) - report.errors.begin());
  return report;
}

}  // namespace damageid
