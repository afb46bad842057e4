#pragma once

#include <cstdint>

#include "brc/encoding/encoding.hpp"

namespace brc {

struct NoiseConfig {
  double sigma = 0.0;  // std of the complex noise: E|eta|^2 = sigma^2
  std::uint64_t seed = 0;
};

/// y = E(B x) + eta, eta i.i.d. complex Gaussian on sampled rows only.
KSpaceData simulate_acquisition(const ComplexImage& x, const RealImage& bias, const CoilSensitivities& coils,
                                const SamplingMask& mask, const NoiseConfig& noise);

}  // namespace brc
