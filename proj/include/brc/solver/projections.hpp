#pragma once

#include "brc/encoding/encoding.hpp"
#include "brc/numerics/image.hpp"

namespace brc {

/// x - E^H(E x - y).
ComplexImage p_dc(const ComplexImage& x, const EncodingContext& enc, const KSpaceData& y);

/// B^-1 [B x - E^H(E B x - y)], with B clamped below at kMinInvertibleBias.
ComplexImage p_dc_bias(const ComplexImage& x, const RealImage& bias, const EncodingContext& enc,
                       const KSpaceData& y);

/// Keep |x|; replace the phase by a Gaussian-smoothed phasor field
/// renormalized to unit modulus. Zero-magnitude pixels get phase 0.
ComplexImage p_phase(const ComplexImage& x, double smoothing_sigma);

/// ||E B x - y||.
double dc_residual(const ComplexImage& x, const RealImage& bias, const EncodingContext& enc, const KSpaceData& y);

}  // namespace brc
