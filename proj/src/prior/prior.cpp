#include "brc/prior/prior.hpp"

#include <algorithm>
#include <cmath>

#include "brc/numerics/rng.hpp"

namespace brc {

std::uint64_t prior_step_seed(std::uint64_t seed, int step) { return derive_seed(seed, 0x5052494fULL, step); }

PriorProjection p_prior(const ComplexImage& x, const PatchVaeParams& params, const PatchGrid& grid, int n_steps,
                        double alpha, std::uint64_t seed) {
  if (n_steps < 1) throw std::invalid_argument("p_prior: n_steps must be >= 1");
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("p_prior: alpha must be >= 0");
  if (x.height() != grid.height || x.width() != grid.width) throw std::invalid_argument("p_prior: grid mismatch");
  if (grid.patch_size != params.arch.patch_size) throw std::invalid_argument("p_prior: patch size mismatch");

  const RealImage start = magnitude(x);
  RealImage mag = start;
  ComplexImage phasor(x.height(), x.width());
  for (std::size_t i = 0; i < x.size(); ++i) phasor[i] = mag[i] > 0.0 ? x[i] / mag[i] : cdouble(1.0, 0.0);

  PriorProjection result;
  for (int step = 0; step < n_steps; ++step) {
    const Eigen::MatrixXd patches = extract_patches(mag, grid);
    const Eigen::MatrixXd eps =
        draw_latent_noise(params.arch.latent, grid.n_patches(), prior_step_seed(seed, step));
    const ElboEvaluation eval = evaluate_elbo(params, patches, eps, true, false);
    result.mean_elbo = eval.terms.elbo.mean();
    const RealImage grad = assemble_patches(eval.input_grad, grid);
    for (std::size_t i = 0; i < mag.size(); ++i) mag[i] = std::max(0.0, mag[i] + alpha * grad[i]);
  }

  result.x = ComplexImage(x.height(), x.width());
  // Untouched pixels are copied so no rounding enters through the phasor.
  for (std::size_t i = 0; i < x.size(); ++i) result.x[i] = mag[i] == start[i] ? x[i] : mag[i] * phasor[i];
  return result;
}

}  // namespace brc
