#pragma once

#include <cstdint>
#include <string>

#include "damageid/inversion.hpp"

namespace damageid {

/// Forward data at a reference process plus seeded Gaussian noise, rescaled
/// so the recorded noise level is exact: |u - u_delta|_{L2} =
/// noise_fraction * |u|_{L2}.
Measurement synthesize_data(const Problem& prob, const DamageProcess& g_true,
                            const ForwardConfig& fwd, double noise_fraction,
                            std::uint64_t seed);

/// CSV tables. Every table carries a header row naming its columns and a
/// trailing `# config-hash = <hex>` provenance footer.

/// State trajectory: t, node coordinates, displacement components, damage.
std::string state_table(const Problem& prob, const StateTrajectory& state,
                        std::uint64_t config_hash);
/// Process coefficients: i_t, i_x, i_y, coeff (i_x flattened over axes).
std::string process_table(const DamageProcess& p, std::uint64_t config_hash);
/// Measurement samples: m, dof, value; the noise level is recorded in a
/// `# delta = ...` footer line before the hash.
std::string measurement_table(const Problem& prob, const Measurement& meas,
                              std::uint64_t config_hash);
/// Landweber history: iter, residual_L2, grad_norm_Ms, step, cone_sample_max,
/// wallclock_s.
std::string iterate_table(const LandweberRecord& rec, const ParameterGram& gram,
                          std::uint64_t config_hash);

/// Parses a measurement_table document back into a Measurement; the data
/// length must match the problem layout.
Measurement read_measurement(const Problem& prob, const std::string& text);

}  // namespace damageid
