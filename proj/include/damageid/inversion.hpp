#pragma once

#include <string>
#include <vector>

#include "damageid/sensitivity.hpp"

namespace damageid {

/// Noisy space-time displacement data with its noise level (L2 data norm
/// bound of the perturbation).
struct Measurement {
  Vec data;
  double delta = 0.0;
};

/// Settings of the projected Landweber iteration.
struct LandweberConfig {
  double step = 0.0;       ///< 0 requests the automatic 0.4 / sigma1^2 choice
  double tau_disc = 1.5;   ///< discrepancy factor, > 1
  int max_iters = 100;
  bool stop_on_discrepancy = true;
};

/// Per-run history of the Landweber iteration. iterates[k] are the process
/// coefficients of g_k; residuals[k] is the weighted data-space residual at
/// g_k; stop_index is the first iterate satisfying the discrepancy rule (or
/// the last one computed).
struct LandweberRecord {
  std::vector<Vec> iterates;
  std::vector<double> residuals;
  std::vector<double> wallclock;  ///< seconds elapsed when each iterate was logged
  int stop_index = 0;
  bool stopped_by_discrepancy = false;
  double step_used = 0.0;
  bool step_warning = false;  ///< residual grew within the first iterations
  std::string abort_reason;   ///< nonempty if the run ended abnormally
};

/// Morozov stopping rule; for delta = 0 an absolute floor of 1e-10 applies.
bool discrepancy_stop(double residual_norm, double delta, double tau_disc);

/// Weighted L2 data norm sqrt(r^T W r) for the problem's data Gram.
double data_norm(const Problem& prob, const Vec& r);

/// Projected Landweber iteration g_{k+1} = project(g_k + step * dPhi(g_k)^*
/// (u_delta - Phi(g_k))), stopping by the discrepancy rule.
LandweberRecord landweber_run(const Problem& prob, const DamageProcess& g0,
                              const ParameterGram& gram, const ForwardConfig& fwd,
                              const Measurement& meas, const LandweberConfig& cfg);

/// Top-k singular values of the discrete linearization in the (M_s, W)
/// geometry, by power iteration with M_s-orthogonal deflation.
std::vector<double> spectrum_probe(const LinearizedOperator& op, int k, int max_iters = 300,
                                   unsigned seed = 1u);

/// One sampled linearization-remainder ratio of the tangential-cone
/// diagnostic.
struct ConeSample {
  double h_norm = 0.0;  ///< |h|_{M_s}
  double ratio = 0.0;   ///< |Phi(g+h)-Phi(g)-dPhi h| / (|h| |Phi(g+h)-Phi(g)|)
  double eta = 0.0;     ///< ratio * |h|, the cone-condition constant per sample
};

struct ConeReport {
  std::vector<ConeSample> samples;
  double max_ratio = 0.0;
  double max_eta = 0.0;
  int skipped = 0;  ///< degenerate samples with Phi(g+h) = Phi(g)
};

/// Samples random admissible perturbations of scale |h|_{M_s} ~ scale and
/// reports the remainder-to-secant ratios bounding the cone constant.
ConeReport cone_constant_estimate(const Problem& prob, const DamageProcess& g,
                                  const ParameterGram& gram, const ForwardConfig& fwd,
                                  int trials, double scale, unsigned seed);

/// Iterate-error curve of a Landweber run against a known reference process.
struct SemiconvergenceReport {
  std::vector<double> errors;     ///< |g_k - g_ref|_{M_s}
  std::vector<double> residuals;  ///< data-space residual norms
  int min_index = 0;              ///< iterate of smallest error
  int stop_index = 0;             ///< first discrepancy-rule index (-1 if never)
};

/// Runs Landweber with stopping disabled and records the error curve; used
/// to expose semiconvergence under noise in twin experiments.
SemiconvergenceReport semiconvergence_probe(const Problem& prob, const DamageProcess& g0,
                                            const DamageProcess& g_ref,
                                            const ParameterGram& gram, const ForwardConfig& fwd,
                                            const Measurement& meas, LandweberConfig cfg);

}  // namespace damageid
