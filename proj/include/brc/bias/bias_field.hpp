#pragma once

#include "brc/numerics/image.hpp"

namespace brc {

/// Smooth multiplicative field, strictly positive, gauge fixed to mean 1
/// over support_mask.
struct BiasField {
  RealImage field;
  RealImage support_mask;
};

/// Lower bound applied to field values whenever the field is inverted.
inline constexpr double kMinInvertibleBias = 0.05;

/// Scale so the in-mask mean is 1. Scaling the companion image by the
/// inverse factor leaves field * image unchanged.
BiasField normalize_field(const BiasField& bias);
/// The factor normalize_field divides by (in-mask mean).
double field_gauge(const BiasField& bias);

/// Field values clamped below at kMinInvertibleBias.
RealImage clamped_field(const RealImage& field);

BiasField unit_field(int height, int width);
BiasField unit_field(const RealImage& support_mask);

}  // namespace brc
