#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "brc/bias/bias_field.hpp"
#include "brc/bias/n4.hpp"
#include "brc/encoding/encoding.hpp"
#include "brc/prior/vae.hpp"

namespace brc {

enum class ReconMode { kBaseline, kJoint };

std::string to_string(ReconMode mode);
ReconMode parse_mode(const std::string& text);

struct SolverConfig {
  ReconMode mode = ReconMode::kJoint;
  int num_iter = 302;
  int bias_estim_freq = 10;
  int dc_proj_freq = 10;
  double alpha = 1e-4;
  int prior_steps = 10;
  int patch_stride = 14;
  bool phase_projection = false;
  double phase_sigma = 4.0;
  /// Leading iterations that skip the prior and apply only data consistency.
  int dc_warmup_iters = 0;
  /// Keep the initial field for the whole run (joint mode).
  bool freeze_bias = false;
  std::uint64_t seed = 0;
};

void validate(const SolverConfig& config);

struct ReconInputs {
  KSpaceData y;
  CoilSensitivities coils;
  RealImage support_mask;                  // region for bias estimation
  const PatchVaeParams* prior = nullptr;   // required when prior_steps > 0
  std::optional<RealImage> initial_bias;   // joint mode: replaces N4(E^H y)
};

struct DcStep {
  int iteration = 0;
  double before = 0.0;
  double after = 0.0;
};

struct ReconDiagnostics {
  std::vector<double> residual_trace;  // ||E B x - y|| at the end of each iteration
  std::vector<double> elbo_trace;      // mean patch ELBO per iteration; NaN when the prior was skipped
  std::vector<DcStep> dc_steps;
  std::vector<int> bias_updates;       // iterations at which B was re-estimated
  bool diverged = false;
  int iterations_run = 0;
};

struct ReconResult {
  ComplexImage x;   // bias-free estimate
  BiasField bias;
  ComplexImage bx;  // bias * x, the reconstruction comparable to measured data
  ReconDiagnostics diagnostics;
};

/// Thrown when an iterate becomes non-finite.
class ReconstructionError : public std::runtime_error {
 public:
  ReconstructionError(const std::string& what, int iteration)
      : std::runtime_error(what), iteration_(iteration) {}
  int iteration() const { return iteration_; }

 private:
  int iteration_;
};

/// Joint image / bias-field reconstruction by alternating projections.
///   B <- N4(|E^H y|), x <- B^-1 E^H y
///   for t in [0, num_iter): prior ascent, optional phase step,
///     data consistency through B when t % dc_proj_freq == 0 and t != 0,
///     B <- N4(|B x|) when t % bias_estim_freq == 0 and t != 0.
/// Baseline mode fixes B = 1. The run stops early and sets `diverged` when
/// the residual measured before a data-consistency step exceeds 10x the
/// smallest such residual seen so far.
ReconResult reconstruct(const ReconInputs& inputs, const SolverConfig& config, const N4Config& n4 = {});

}  // namespace brc
