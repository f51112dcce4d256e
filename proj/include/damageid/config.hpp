#pragma once

#include <cstdint>
#include <string>

#include "damageid/forward.hpp"
#include "damageid/inversion.hpp"
#include "damageid/problem.hpp"

namespace damageid {

/// Complete description of one experiment, parsed from a flat sectioned
/// key-value file. Every key has a default, so the empty document is the
/// minimal valid N=1 configuration.
struct ExperimentConfig {
  DomainSpec domain;
  TimeGrid grid{1.0, 32};
  MaterialModel material;
  MollifierSpec mollifier;
  ForwardConfig forward;
  LandweberConfig landweber;

  // constant material coefficients behind MaterialModel's callbacks
  double young = 1.0;
  double lame_lambda = 1.0;
  double lame_mu = 1.0;

  // process discretization
  int process_t_cells = 2;
  int process_x_cells = 4;
  int process_y_cells = 1;  ///< second spatial axis, dimension == 2 only
  int process_y_splines = 12;
  double gram_s = 1.0;

  // constant loads
  double body_x = 2.0, body_y = 0.0;
  double traction_x = 1.0, traction_y = 0.0;

  // ground-truth process for twin experiments: g(y) = min(g_max, y^2 / truth_scale)
  std::string truth_kind = "quadratic";
  double truth_scale = 8.0;

  // experiment driver
  std::uint64_t seed = 1;
  double noise = 0.0;
  double initial_fraction = 0.2;  ///< g0 = initial_fraction * g_max, constant
  std::string output_dir = ".";

  /// Problem parts derived from the scalar fields.
  MaterialModel build_material() const;
  ProcessBasis build_process_basis() const;
  Problem build_problem() const;
  DamageProcess initial_process() const;
  DamageProcess truth_process() const;
};

/// Parses and validates a configuration document. Unknown keys are rejected
/// with a nearest-key suggestion; invariant violations name the key path.
/// All errors are std::invalid_argument.
ExperimentConfig parse_config(const std::string& text);

/// Serializes every effective value; parse_config(serialize_config(c))
/// round-trips.
std::string serialize_config(const ExperimentConfig& cfg);

/// FNV-1a hash of a string, used for the provenance footer of output tables.
std::uint64_t fnv1a_hash(const std::string& text);

}  // namespace damageid
