#include "brc/prior/train.hpp"

#include <cmath>
#include <string>

namespace brc {

Eigen::MatrixXd PatchDataset::sample(Rng& rng, int n) const {
  const int ps = patch_size;
  Eigen::MatrixXd patches(ps * ps, n);
  for (int k = 0; k < n; ++k) {
    const auto& img = images[rng.below(images.size())];
    const int r0 = static_cast<int>(rng.below(img.height() - ps + 1));
    const int c0 = static_cast<int>(rng.below(img.width() - ps + 1));
    for (int i = 0; i < ps; ++i)
      for (int j = 0; j < ps; ++j) patches(i * ps + j, k) = img(r0 + i, c0 + j);
  }
  return patches;
}

TrainResult train_vae(const PatchDataset& dataset, const VaeArch& arch, const TrainConfig& config) {
  if (dataset.images.empty()) throw std::invalid_argument("train_vae: empty dataset");
  if (dataset.patch_size != arch.patch_size) throw std::invalid_argument("train_vae: patch size mismatch");
  for (const auto& img : dataset.images) {
    if (img.height() < arch.patch_size || img.width() < arch.patch_size) {
      throw std::invalid_argument("train_vae: training image smaller than a patch");
    }
  }
  if (config.batch_size < 1 || config.n_iterations < 1) {
    throw std::invalid_argument("train_vae: batch_size and n_iterations must be >= 1");
  }
  if (!(config.learning_rate >= 0.0)) throw std::invalid_argument("train_vae: learning rate must be >= 0");

  TrainResult result;
  result.params = PatchVaeParams::random_init(arch, derive_seed(config.seed, 0x494e4954ULL));
  PatchVaeParams m = PatchVaeParams::zeros(arch);
  PatchVaeParams v = PatchVaeParams::zeros(arch);
  Rng batch_rng(derive_seed(config.seed, 0x42415443ULL));
  result.loss_trace.reserve(config.n_iterations);

  double beta1_t = 1.0;
  double beta2_t = 1.0;
  for (int it = 0; it < config.n_iterations; ++it) {
    const Eigen::MatrixXd batch = dataset.sample(batch_rng, config.batch_size);
    const Eigen::MatrixXd eps =
        draw_latent_noise(arch.latent, config.batch_size, derive_seed(config.seed, 0x4e4f4953ULL, it));
    ElboEvaluation eval;
    try {
      eval = evaluate_elbo(result.params, batch, eps, false, true);
    } catch (const DivergenceError&) {
      throw DivergenceError("train_vae: non-finite loss at iteration " + std::to_string(it));
    }
    const double loss = -eval.terms.elbo.mean();
    if (!std::isfinite(loss)) throw DivergenceError("train_vae: non-finite loss at iteration " + std::to_string(it));
    result.loss_trace.push_back(loss);

    beta1_t *= config.beta1;
    beta2_t *= config.beta2;
    const double step = config.learning_rate * std::sqrt(1.0 - beta2_t) / (1.0 - beta1_t);
    for (int t = 0; t < PatchVaeParams::kTensorCount; ++t) {
      // Descent on the loss = ascent on the ELBO.
      const Eigen::MatrixXd g = -eval.param_grad->tensors[t] / config.batch_size;
      m.tensors[t] = config.beta1 * m.tensors[t] + (1.0 - config.beta1) * g;
      v.tensors[t] = config.beta2 * v.tensors[t] + (1.0 - config.beta2) * g.cwiseProduct(g);
      result.params.tensors[t].array() -=
          step * m.tensors[t].array() / (v.tensors[t].array().sqrt() + config.epsilon);
    }
  }
  return result;
}

}  // namespace brc
