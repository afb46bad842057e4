#pragma once

#include <vector>

#include "brc/numerics/image.hpp"

namespace brc {

/// Normalized 1D Gaussian taps on [-radius, radius], radius = ceil(4 sigma).
std::vector<double> gaussian_kernel(double sigma);

/// Map an out-of-range index into [0, n) by half-sample symmetric
/// reflection (d c b a | a b c d | d c b a).
int reflect_index(int i, int n);

/// Separable Gaussian blur with reflective boundary. sigma = 0 is identity.
RealImage lowpass_gaussian(const RealImage& img, double sigma);

}  // namespace brc
