#pragma once

#include "brc/numerics/image.hpp"

namespace brc {

/// Forward 2D DFT scaled by 1/sqrt(HW), so the transform is unitary.
/// Any size is supported; non-finite input throws std::invalid_argument.
ComplexImage fft2_unitary(const ComplexImage& img);

/// Inverse of fft2_unitary (and its adjoint).
ComplexImage ifft2_unitary(const ComplexImage& img);

/// Circular shift moving index (0, 0) to (h / 2, w / 2).
ComplexImage fftshift(const ComplexImage& img);
/// Inverse of fftshift (differs from it for odd sizes).
ComplexImage ifftshift(const ComplexImage& img);

}  // namespace brc
