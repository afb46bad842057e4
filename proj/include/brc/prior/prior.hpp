#pragma once

#include <cstdint>

#include "brc/numerics/image.hpp"
#include "brc/prior/patch_grid.hpp"
#include "brc/prior/vae.hpp"

namespace brc {

struct PriorProjection {
  ComplexImage x;
  double mean_elbo = 0.0;  // mean patch ELBO at the last ascent step
};

/// Seed of ascent step `step` within one projection.
std::uint64_t prior_step_seed(std::uint64_t seed, int step);

/// n_steps of gradient ascent on the patch ELBO w.r.t. |x|, one latent draw
/// per step. Overlapping patch gradients are averaged by grid coverage, the
/// magnitude is clamped at 0 after each step, and the phase of every pixel
/// is kept.
PriorProjection p_prior(const ComplexImage& x, const PatchVaeParams& params, const PatchGrid& grid, int n_steps,
                        double alpha, std::uint64_t seed);

}  // namespace brc
