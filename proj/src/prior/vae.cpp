#include "brc/prior/vae.hpp"

#include <cmath>
#include <numbers>

#include "brc/numerics/rng.hpp"

namespace brc {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

double softplus(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

MatrixXd affine(const MatrixXd& w, const MatrixXd& b, const MatrixXd& in) {
  MatrixXd out = w * in;
  out.colwise() += b.col(0);
  return out;
}

MatrixXd apply_softplus(const MatrixXd& a) { return a.unaryExpr([](double v) { return softplus(v); }); }
MatrixXd apply_sigmoid(const MatrixXd& a) { return a.unaryExpr([](double v) { return sigmoid(v); }); }

}  // namespace

std::string_view PatchVaeParams::name(int t) {
  static constexpr std::array<std::string_view, kTensorCount> names = {
      "enc_w1", "enc_b1", "enc_w2", "enc_b2", "mu_w",   "mu_b",  "logvar_w",
      "logvar_b", "dec_w1", "dec_b1", "dec_w2", "dec_b2", "out_w", "out_b"};
  return names.at(t);
}

std::pair<int, int> PatchVaeParams::shape(const VaeArch& a, int t) {
  const int d = a.input_dim();
  switch (t) {
    case kEncW1: return {a.hidden, d};
    case kEncB1: return {a.hidden, 1};
    case kEncW2: return {a.hidden, a.hidden};
    case kEncB2: return {a.hidden, 1};
    case kMuW:
    case kLogVarW: return {a.latent, a.hidden};
    case kMuB:
    case kLogVarB: return {a.latent, 1};
    case kDecW1: return {a.hidden, a.latent};
    case kDecB1: return {a.hidden, 1};
    case kDecW2: return {a.hidden, a.hidden};
    case kDecB2: return {a.hidden, 1};
    case kOutW: return {d, a.hidden};
    case kOutB: return {d, 1};
    default: throw std::out_of_range("PatchVaeParams::shape: bad tensor index");
  }
}

PatchVaeParams PatchVaeParams::zeros(const VaeArch& arch) {
  if (arch.patch_size < 1 || arch.hidden < 1 || arch.latent < 1 || !(arch.sigma > 0.0)) {
    throw std::invalid_argument("VaeArch: patch_size, hidden, latent must be >= 1 and sigma > 0");
  }
  PatchVaeParams p;
  p.arch = arch;
  for (int t = 0; t < kTensorCount; ++t) {
    const auto [rows, cols] = shape(arch, t);
    p.tensors[t] = MatrixXd::Zero(rows, cols);
  }
  return p;
}

PatchVaeParams PatchVaeParams::random_init(const VaeArch& arch, std::uint64_t seed) {
  PatchVaeParams p = zeros(arch);
  Rng rng(seed);
  for (int t : {kEncW1, kEncW2, kMuW, kLogVarW, kDecW1, kDecW2, kOutW}) {
    auto& w = p.tensors[t];
    double scale = 1.0 / std::sqrt(static_cast<double>(w.cols()));
    if (t == kLogVarW) scale *= 0.1;
    for (Eigen::Index c = 0; c < w.cols(); ++c)
      for (Eigen::Index r = 0; r < w.rows(); ++r) w(r, c) = scale * rng.normal();
  }
  return p;
}

void PatchVaeParams::validate() const {
  for (int t = 0; t < kTensorCount; ++t) {
    const auto [rows, cols] = shape(arch, t);
    if (tensors[t].rows() != rows || tensors[t].cols() != cols) {
      throw std::invalid_argument("PatchVaeParams: tensor " + std::string(name(t)) + " has wrong shape");
    }
    if (!tensors[t].allFinite()) {
      throw std::invalid_argument("PatchVaeParams: tensor " + std::string(name(t)) + " is not finite");
    }
  }
}

bool PatchVaeParams::operator==(const PatchVaeParams& other) const {
  if (!(arch == other.arch)) return false;
  for (int t = 0; t < kTensorCount; ++t) {
    if (tensors[t].rows() != other.tensors[t].rows() || tensors[t].cols() != other.tensors[t].cols()) return false;
    if (tensors[t] != other.tensors[t]) return false;
  }
  return true;
}

Eigen::MatrixXd draw_latent_noise(int latent, int n_patches, std::uint64_t seed) {
  MatrixXd eps(latent, n_patches);
  Rng rng(seed);
  for (int c = 0; c < n_patches; ++c)
    for (int r = 0; r < latent; ++r) eps(r, c) = rng.normal();
  return eps;
}

ElboEvaluation evaluate_elbo(const PatchVaeParams& p, const MatrixXd& patches, const MatrixXd& latent_noise,
                             bool want_input_grad, bool want_param_grad) {
  const VaeArch& arch = p.arch;
  const int d = arch.input_dim();
  if (patches.rows() != d) throw std::invalid_argument("evaluate_elbo: patch dimension does not match arch");
  if (latent_noise.rows() != arch.latent || latent_noise.cols() != patches.cols()) {
    throw std::invalid_argument("evaluate_elbo: latent noise shape mismatch");
  }
  if (!patches.allFinite()) throw std::invalid_argument("evaluate_elbo: non-finite patch values");
  using T = PatchVaeParams;
  const double inv_var = 1.0 / (arch.sigma * arch.sigma);

  // Forward.
  const MatrixXd a1 = affine(p[T::kEncW1], p[T::kEncB1], patches);
  const MatrixXd h1 = apply_softplus(a1);
  const MatrixXd a2 = affine(p[T::kEncW2], p[T::kEncB2], h1);
  const MatrixXd h2 = apply_softplus(a2);
  const MatrixXd mu = affine(p[T::kMuW], p[T::kMuB], h2);
  const MatrixXd logvar = affine(p[T::kLogVarW], p[T::kLogVarB], h2);
  const MatrixXd stddev = (0.5 * logvar.array()).exp().matrix();
  const MatrixXd z = mu + stddev.cwiseProduct(latent_noise);
  const MatrixXd a3 = affine(p[T::kDecW1], p[T::kDecB1], z);
  const MatrixXd h3 = apply_softplus(a3);
  const MatrixXd a4 = affine(p[T::kDecW2], p[T::kDecB2], h3);
  const MatrixXd h4 = apply_softplus(a4);
  const MatrixXd out = affine(p[T::kOutW], p[T::kOutB], h4);
  const MatrixXd residual = patches - out;

  ElboEvaluation result;
  const double log_norm = 0.5 * d * std::log(2.0 * std::numbers::pi * arch.sigma * arch.sigma);
  result.terms.recon = (-0.5 * inv_var) * residual.colwise().squaredNorm().transpose();
  result.terms.recon.array() -= log_norm;
  const MatrixXd var = logvar.array().exp().matrix();
  result.terms.kl = 0.5 * (mu.array().square() + var.array() - 1.0 - logvar.array()).colwise().sum().transpose();
  result.terms.elbo = result.terms.recon - result.terms.kl;
  if (!result.terms.elbo.allFinite()) throw DivergenceError("evaluate_elbo: non-finite activations");
  if (!want_input_grad && !want_param_grad) return result;

  // Backward pass of sum(elbo).
  const MatrixXd g_out = inv_var * residual;
  const MatrixXd g_a4 = (p[T::kOutW].transpose() * g_out).cwiseProduct(apply_sigmoid(a4));
  const MatrixXd g_a3 = (p[T::kDecW2].transpose() * g_a4).cwiseProduct(apply_sigmoid(a3));
  const MatrixXd g_z = p[T::kDecW1].transpose() * g_a3;
  const MatrixXd g_mu = g_z - mu;
  const MatrixXd g_logvar =
      (0.5 * g_z.array() * latent_noise.array() * stddev.array() - 0.5 * (var.array() - 1.0)).matrix();
  const MatrixXd g_a2 =
      (p[T::kMuW].transpose() * g_mu + p[T::kLogVarW].transpose() * g_logvar).cwiseProduct(apply_sigmoid(a2));
  const MatrixXd g_a1 = (p[T::kEncW2].transpose() * g_a2).cwiseProduct(apply_sigmoid(a1));

  if (want_input_grad) {
    result.input_grad = p[T::kEncW1].transpose() * g_a1 - g_out;
    if (!result.input_grad.allFinite()) throw DivergenceError("elbo_grad_input: non-finite gradient");
  }
  if (want_param_grad) {
    PatchVaeParams g;
    g.arch = arch;
    g[T::kOutW] = g_out * h4.transpose();
    g[T::kOutB] = g_out.rowwise().sum();
    g[T::kDecW2] = g_a4 * h3.transpose();
    g[T::kDecB2] = g_a4.rowwise().sum();
    g[T::kDecW1] = g_a3 * z.transpose();
    g[T::kDecB1] = g_a3.rowwise().sum();
    g[T::kMuW] = g_mu * h2.transpose();
    g[T::kMuB] = g_mu.rowwise().sum();
    g[T::kLogVarW] = g_logvar * h2.transpose();
    g[T::kLogVarB] = g_logvar.rowwise().sum();
    g[T::kEncW2] = g_a2 * h1.transpose();
    g[T::kEncB2] = g_a2.rowwise().sum();
    g[T::kEncW1] = g_a1 * patches.transpose();
    g[T::kEncB1] = g_a1.rowwise().sum();
    result.param_grad = std::move(g);
  }
  return result;
}

Eigen::VectorXd elbo(const MatrixXd& patches, const PatchVaeParams& params, int n_mc, std::uint64_t seed) {
  if (n_mc < 1) throw std::invalid_argument("elbo: n_mc must be >= 1");
  VectorXd acc = VectorXd::Zero(patches.cols());
  for (int s = 0; s < n_mc; ++s) {
    const MatrixXd eps = draw_latent_noise(params.arch.latent, static_cast<int>(patches.cols()), derive_seed(seed, s));
    acc += evaluate_elbo(params, patches, eps, false, false).terms.elbo;
  }
  return acc / n_mc;
}

Eigen::MatrixXd elbo_grad_input(const MatrixXd& patches, const PatchVaeParams& params, int n_mc,
                                std::uint64_t seed) {
  if (n_mc < 1) throw std::invalid_argument("elbo_grad_input: n_mc must be >= 1");
  MatrixXd acc = MatrixXd::Zero(patches.rows(), patches.cols());
  for (int s = 0; s < n_mc; ++s) {
    const MatrixXd eps = draw_latent_noise(params.arch.latent, static_cast<int>(patches.cols()), derive_seed(seed, s));
    acc += evaluate_elbo(params, patches, eps, true, false).input_grad;
  }
  return acc / n_mc;
}

}  // namespace brc
