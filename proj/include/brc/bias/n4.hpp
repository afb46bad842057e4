#pragma once

#include <vector>

#include "brc/bias/bias_field.hpp"
#include "brc/numerics/histogram.hpp"
#include "brc/numerics/image.hpp"

namespace brc {

struct N4Config {
  int n_bins = 200;
  double fwhm = 0.15;  // log-intensity units
  double wiener_noise = 0.01;
  double control_spacing = 64.0;  // pixels, finest fitting level
  double convergence_threshold = 1e-3;
  int max_iterations = 50;  // per fitting level
  int n_fitting_levels = 1;
};

void validate(const N4Config& config);

/// Piecewise-linear map from observed to expected (sharpened) log-intensity.
struct IntensityMapping {
  std::vector<double> centers;   // increasing
  std::vector<double> expected;  // E[u | v] at each center

  /// Linear interpolation; flat outside [centers.front(), centers.back()].
  double operator()(double v) const;
};

/// Wiener-deconvolve the log-intensity histogram by a Gaussian of the given
/// FWHM, then return the posterior-mean mapping E[u | v] of the
/// deconvolved distribution under the same Gaussian blur.
IntensityMapping sharpen_histogram(const Histogram& hist, double fwhm, double wiener_noise);

struct BiasEstimate {
  BiasField bias;
  bool converged = false;
  int iterations = 0;  // summed over fitting levels
};

/// Iterative log-domain nonuniformity estimation: sharpen the histogram of
/// the corrected log image, B-spline smooth the residual, accumulate. The
/// result is normalized to mean 1 over support_mask.
BiasEstimate estimate_bias(const RealImage& img, const RealImage& support_mask, const N4Config& config = {});

}  // namespace brc
