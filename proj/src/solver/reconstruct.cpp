#include "brc/solver/reconstruct.hpp"

#include <cmath>
#include <limits>
#include <optional>

#include "brc/numerics/rng.hpp"
#include "brc/prior/patch_grid.hpp"
#include "brc/prior/prior.hpp"
#include "brc/solver/projections.hpp"

namespace brc {

std::string to_string(ReconMode mode) { return mode == ReconMode::kBaseline ? "baseline" : "joint"; }

ReconMode parse_mode(const std::string& text) {
  if (text == "baseline") return ReconMode::kBaseline;
  if (text == "joint") return ReconMode::kJoint;
  throw std::invalid_argument("unknown reconstruction mode '" + text + "' (expected baseline or joint)");
}

void validate(const SolverConfig& c) {
  if (c.num_iter < 1) throw std::invalid_argument("SolverConfig: num_iter must be >= 1");
  if (c.bias_estim_freq < 1 || c.dc_proj_freq < 1) {
    throw std::invalid_argument("SolverConfig: frequencies must be >= 1");
  }
  if (!(c.alpha > 0.0) || !std::isfinite(c.alpha)) throw std::invalid_argument("SolverConfig: alpha must be > 0");
  if (c.prior_steps < 0 || c.dc_warmup_iters < 0) {
    throw std::invalid_argument("SolverConfig: prior_steps and dc_warmup_iters must be >= 0");
  }
  if (c.patch_stride < 1) throw std::invalid_argument("SolverConfig: patch_stride must be >= 1");
  if (!(c.phase_sigma >= 0.0)) throw std::invalid_argument("SolverConfig: phase_sigma must be >= 0");
}

namespace {

constexpr double kDivergenceFactor = 10.0;

BiasField estimate_clamped(const ComplexImage& img, const RealImage& mask, const N4Config& n4) {
  BiasField b = estimate_bias(magnitude(img), mask, n4).bias;
  b.field = clamped_field(b.field);
  return b;
}

}  // namespace

ReconResult reconstruct(const ReconInputs& in, const SolverConfig& config, const N4Config& n4) {
  validate(config);
  validate(n4);
  if (in.y.coil_data.empty()) throw std::invalid_argument("reconstruct: no k-space data");
  const int h = in.coils.height();
  const int w = in.coils.width();
  require_same_shape(in.support_mask, in.coils.maps.front(), "reconstruct (support mask)");
  if (config.prior_steps > 0) {
    if (in.prior == nullptr) throw std::invalid_argument("reconstruct: prior_steps > 0 needs prior parameters");
    in.prior->validate();
  }
  const EncodingContext enc{in.coils, in.y.mask};
  const bool joint = config.mode == ReconMode::kJoint;

  const ComplexImage zero_filled = apply_EH(in.y, in.coils);
  BiasField bias = unit_field(in.support_mask);
  if (joint) {
    if (in.initial_bias) {
      require_same_shape(*in.initial_bias, zero_filled, "reconstruct (initial bias)");
      bias.field = clamped_field(*in.initial_bias);
    } else {
      bias = estimate_clamped(zero_filled, in.support_mask, n4);
    }
  }
  ComplexImage x = divide(zero_filled, bias.field);

  std::optional<PatchGrid> grid;
  if (config.prior_steps > 0) grid = make_patch_grid(h, w, in.prior->arch.patch_size, config.patch_stride);

  ReconResult result;
  auto& diag = result.diagnostics;
  double min_pre_dc = std::numeric_limits<double>::infinity();
  const double residual_floor = 1e-12 * std::max(1.0, norm2(in.y));

  for (int t = 0; t < config.num_iter; ++t) {
    const bool warmup = t < config.dc_warmup_iters;
    double elbo = std::numeric_limits<double>::quiet_NaN();
    if (!warmup && config.prior_steps > 0) {
      const auto proj = p_prior(x, *in.prior, *grid, config.prior_steps, config.alpha, derive_seed(config.seed, t));
      x = proj.x;
      elbo = proj.mean_elbo;
    }
    if (config.phase_projection) x = p_phase(x, config.phase_sigma);

    if (warmup || (t % config.dc_proj_freq == 0 && t != 0)) {
      DcStep step{t, dc_residual(x, bias.field, enc, in.y), 0.0};
      x = p_dc_bias(x, bias.field, enc, in.y);
      step.after = dc_residual(x, bias.field, enc, in.y);
      diag.dc_steps.push_back(step);
      if (step.before > residual_floor && min_pre_dc > residual_floor &&
          step.before > kDivergenceFactor * min_pre_dc) {
        diag.diverged = true;
      }
      min_pre_dc = std::min(min_pre_dc, step.before);
    }

    if (joint && !config.freeze_bias && t % config.bias_estim_freq == 0 && t != 0) {
      bias = estimate_clamped(multiply(x, bias.field), in.support_mask, n4);
      diag.bias_updates.push_back(t);
    }

    if (!all_finite(x)) throw ReconstructionError("reconstruct: non-finite iterate at iteration " + std::to_string(t), t);
    diag.residual_trace.push_back(dc_residual(x, bias.field, enc, in.y));
    diag.elbo_trace.push_back(elbo);
    diag.iterations_run = t + 1;
    if (diag.diverged) break;
  }

  result.bx = multiply(x, bias.field);
  result.x = std::move(x);
  result.bias = std::move(bias);
  return result;
}

}  // namespace brc
