#pragma once

#include <cstdint>
#include <vector>

#include "brc/numerics/image.hpp"
#include "brc/numerics/rng.hpp"
#include "brc/prior/vae.hpp"

namespace brc {

/// Training images from which square patches are drawn with replacement.
struct PatchDataset {
  std::vector<RealImage> images;
  int patch_size = 28;

  /// n patches as columns: uniform image index, uniform top-left corner.
  Eigen::MatrixXd sample(Rng& rng, int n) const;
};

struct TrainConfig {
  int batch_size = 50;
  int n_iterations = 1000;
  double learning_rate = 1e-3;
  std::uint64_t seed = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct TrainResult {
  PatchVaeParams params;
  std::vector<double> loss_trace;  // -mean batch ELBO per iteration
};

/// Adam on -mean ELBO over random patch batches. Deterministic per seed.
TrainResult train_vae(const PatchDataset& dataset, const VaeArch& arch, const TrainConfig& config);

}  // namespace brc
