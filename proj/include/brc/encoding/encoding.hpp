#pragma once

#include <vector>

#include "brc/encoding/coils.hpp"
#include "brc/encoding/mask.hpp"
#include "brc/numerics/image.hpp"

namespace brc {

/// Measured k-space in centered layout (DC at row h / 2, column w / 2),
/// stored dense: rows outside the mask are exactly zero.
struct KSpaceData {
  std::vector<ComplexImage> coil_data;
  SamplingMask mask;
};

/// Everything E needs besides the image.
struct EncodingContext {
  CoilSensitivities coils;
  SamplingMask mask;
};

/// E x: per coil, mask * fftshift(fft2_unitary(S_c * x)).
KSpaceData apply_E(const ComplexImage& x, const CoilSensitivities& coils, const SamplingMask& mask);
/// E^H y: sum_c conj(S_c) * ifft2_unitary(ifftshift(y_c)). Rows outside y.mask are ignored.
ComplexImage apply_EH(const KSpaceData& y, const CoilSensitivities& coils);

/// Zero the rows not kept by mask, in place.
void apply_mask(ComplexImage& kspace, const SamplingMask& mask);

/// k-space difference a - b (same mask).
KSpaceData subtract(const KSpaceData& a, const KSpaceData& b);
/// Hermitian inner product summed over coils.
cdouble inner(const KSpaceData& a, const KSpaceData& b);
double norm2(const KSpaceData& y);

}  // namespace brc
