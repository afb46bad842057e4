#pragma once

#include <cstdint>

#include "brc/bias/bias_field.hpp"

namespace brc {

struct BiasSynthConfig {
  double amplitude = 0.15;        // max |B - 1| inside the mask
  double length_scale = 24.0;     // Gaussian smoothing of the random component, pixels
  double control_spacing = 64.0;  // spline space the log-field is projected onto
  /// Share of a centered radial (center-bright) profile in the log-field;
  /// the rest is the seeded random component.
  double center_weight = 0.0;
  std::uint64_t seed = 0;
};

void validate(const BiasSynthConfig& cfg);

/// exp of a seeded smooth random log-field, projected onto the cubic
/// B-spline space of cfg.control_spacing, scaled so max |B - 1| over the
/// mask equals cfg.amplitude, normalized to mean 1 over the mask.
BiasField synth_bias(const BiasSynthConfig& cfg, const RealImage& support_mask);
BiasField synth_bias(const BiasSynthConfig& cfg, int height, int width);

/// normalize(1 / B): the reciprocal field with the same support.
BiasField reciprocal_field(const BiasField& bias);

}  // namespace brc
