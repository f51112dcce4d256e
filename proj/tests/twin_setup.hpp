#pragma once

#include <string>

#include "damageid/config.hpp"
#include "damageid/data_io.hpp"

namespace damageid::testing {

/// Everything needed for a twin-experiment style test, derived from a config
/// document (the empty string gives the default N=1 bar pulled at the right
/// end, 64 elements, 32 time steps, 12 strain splines).
struct TwinSetup {
  ExperimentConfig cfg;
  Problem prob;
  DamageProcess truth;
  ParameterGram gram;

  explicit TwinSetup(const std::string& text = "")
      : cfg(parse_config(text)),
        prob(cfg.build_problem()),
        truth(cfg.truth_process()),
        gram(cfg.build_process_basis(), cfg.gram_s) {}
};

/// A y-dependent process strictly inside the admissible box (margin a quarter
/// of g_max on both sides), so small perturbations never touch the
/// projection.
inline DamageProcess interior_process(const TwinSetup& tw) {
  DamageProcess p = tw.truth;
  p.coeffs = Eigen::VectorXd::Constant(p.coeffs.size(), 0.25 * p.g_max) + 0.5 * tw.truth.coeffs;
  return p;
}

/// Small configuration for the heavier operator-level tests.
inline std::string small_config() {
  return "[domain]\nnx = 16\n[time]\nsteps = 8\n[process]\ny_splines = 6\n"
         "[mollifier]\nradius = 0.25\n";
}

}  // namespace damageid::testing
