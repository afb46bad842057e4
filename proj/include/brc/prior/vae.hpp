#pragma once

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace brc {

/// Raised when a forward/backward pass or a training run produces
/// non-finite values.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct VaeArch {
  int patch_size = 28;
  int hidden = 256;
  int latent = 32;
  double sigma = 0.1;  // fixed Gaussian likelihood std

  int input_dim() const { return patch_size * patch_size; }
  bool operator==(const VaeArch&) const = default;
};

/// MLP encoder (two softplus hidden layers -> latent mean, log-variance)
/// and MLP decoder (two softplus hidden layers -> linear patch mean).
/// Patches are columns, flattened row-major.
struct PatchVaeParams {
  enum Tensor : int {
    kEncW1,
    kEncB1,
    kEncW2,
    kEncB2,
    kMuW,
    kMuB,
    kLogVarW,
    kLogVarB,
    kDecW1,
    kDecB1,
    kDecW2,
    kDecB2,
    kOutW,
    kOutB,
    kTensorCount
  };

  VaeArch arch;
  std::array<Eigen::MatrixXd, kTensorCount> tensors;

  Eigen::MatrixXd& operator[](Tensor t) { return tensors[t]; }
  const Eigen::MatrixXd& operator[](Tensor t) const { return tensors[t]; }

  static std::string_view name(int t);
  /// Expected (rows, cols) of tensor t for arch.
  static std::pair<int, int> shape(const VaeArch& arch, int t);

  static PatchVaeParams zeros(const VaeArch& arch);
  /// LeCun-normal weights, zero biases.
  static PatchVaeParams random_init(const VaeArch& arch, std::uint64_t seed);

  /// Throws std::invalid_argument when shapes disagree with arch or values are non-finite.
  void validate() const;
  bool operator==(const PatchVaeParams& other) const;
};

struct ElboTerms {
  Eigen::VectorXd elbo;   // per patch
  Eigen::VectorXd recon;  // E_q[log p(patch | z)], single draw
  Eigen::VectorXd kl;     // KL(q(z | patch) || N(0, I)), closed form
};

struct ElboEvaluation {
  ElboTerms terms;
  Eigen::MatrixXd input_grad;           // d(sum elbo)/d(patches); empty unless requested
  std::optional<PatchVaeParams> param_grad;  // d(sum elbo)/d(params); unset unless requested
};

/// One reparameterized draw per patch with the given latent noise
/// (latent x n_patches).
ElboEvaluation evaluate_elbo(const PatchVaeParams& params, const Eigen::MatrixXd& patches,
                             const Eigen::MatrixXd& latent_noise, bool want_input_grad, bool want_param_grad);

/// Standard-normal latent noise, filled column by column from one seeded stream.
Eigen::MatrixXd draw_latent_noise(int latent, int n_patches, std::uint64_t seed);

/// Monte-Carlo ELBO per patch averaged over n_mc draws; draw s uses
/// derive_seed(seed, s).
Eigen::VectorXd elbo(const Eigen::MatrixXd& patches, const PatchVaeParams& params, int n_mc, std::uint64_t seed);

/// Gradient of the same seeded Monte-Carlo ELBO w.r.t. the patch values.
Eigen::MatrixXd elbo_grad_input(const Eigen::MatrixXd& patches, const PatchVaeParams& params, int n_mc,
                                std::uint64_t seed);

}  // namespace brc
