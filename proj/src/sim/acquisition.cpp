#include "brc/sim/acquisition.hpp"

#include <cmath>
#include <stdexcept>

#include "brc/numerics/rng.hpp"

namespace brc {

KSpaceData simulate_acquisition(const ComplexImage& x, const RealImage& bias, const CoilSensitivities& coils,
                                const SamplingMask& mask, const NoiseConfig& noise) {
  if (!(noise.sigma >= 0.0)) throw std::invalid_argument("simulate_acquisition: noise sigma must be >= 0");
  require_same_shape(x, bias, "simulate_acquisition");
  KSpaceData y = apply_E(multiply(x, bias), coils, mask);
  if (noise.sigma == 0.0) return y;
  Rng rng(noise.seed);
  const double component_sd = noise.sigma / std::sqrt(2.0);
  for (auto& k : y.coil_data) {
    for (int r : mask.kept_rows) {
      for (int c = 0; c < k.width(); ++c) {
        const double re = rng.normal();
        const double im = rng.normal();
        k(r, c) += cdouble(component_sd * re, component_sd * im);
      }
    }
  }
  return y;
}

}  // namespace brc
