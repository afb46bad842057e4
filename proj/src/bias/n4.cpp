#include "brc/bias/n4.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "brc/numerics/bspline.hpp"
#include "brc/numerics/fft.hpp"

namespace brc {
namespace {

// Circular DFT with the usual unnormalized forward convention.
std::vector<cdouble> dft(const std::vector<cdouble>& v) {
  ComplexImage row(1, static_cast<int>(v.size()));
  std::copy(v.begin(), v.end(), row.values().begin());
  ComplexImage out = fft2_unitary(row);
  const double s = std::sqrt(static_cast<double>(v.size()));
  std::vector<cdouble> res(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) res[i] = out[i] * s;
  return res;
}

std::vector<cdouble> idft(const std::vector<cdouble>& v) {
  ComplexImage row(1, static_cast<int>(v.size()));
  std::copy(v.begin(), v.end(), row.values().begin());
  ComplexImage out = ifft2_unitary(row);
  const double s = 1.0 / std::sqrt(static_cast<double>(v.size()));
  std::vector<cdouble> res(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) res[i] = out[i] * s;
  return res;
}

IntensityMapping identity_mapping(const Histogram& hist) {
  IntensityMapping m;
  for (int k = 0; k < hist.n_bins(); ++k) {
    m.centers.push_back(hist.center(k));
    m.expected.push_back(hist.center(k));
  }
  return m;
}

}  // namespace

void validate(const N4Config& c) {
  if (c.n_bins < 8) throw std::invalid_argument("N4Config: n_bins must be >= 8");
  if (!(c.fwhm > 0.0) || !(c.wiener_noise > 0.0) || !(c.control_spacing >= 2.0) ||
      !(c.convergence_threshold > 0.0) || c.max_iterations < 1 || c.n_fitting_levels < 1) {
    throw std::invalid_argument("N4Config: parameters must be positive (control_spacing >= 2)");
  }
}

double IntensityMapping::operator()(double v) const {
  if (v <= centers.front()) return expected.front();
  if (v >= centers.back()) return expected.back();
  const double step = (centers.back() - centers.front()) / (centers.size() - 1);
  const auto k = std::min(static_cast<std::size_t>((v - centers.front()) / step), centers.size() - 2);
  const double t = (v - centers[k]) / (centers[k + 1] - centers[k]);
  return expected[k] + t * (expected[k + 1] - expected[k]);
}

IntensityMapping sharpen_histogram(const Histogram& hist, double fwhm, double wiener_noise) {
  if (!(hist.total() > 0.0)) throw std::invalid_argument("sharpen_histogram: histogram has no mass");
  if (!(fwhm > 0.0) || !(wiener_noise > 0.0)) {
    throw std::invalid_argument("sharpen_histogram: fwhm and wiener_noise must be positive");
  }
  const int n = hist.n_bins();
  const auto occupied = std::count_if(hist.counts.begin(), hist.counts.end(), [](double c) { return c > 0.0; });
  if (n < 2 || occupied <= 1) return identity_mapping(hist);

  const double slope = hist.bin_width();
  const int exponent = static_cast<int>(std::ceil(std::log2(static_cast<double>(n)))) + 1;
  const int padded = 1 << exponent;
  const int offset = (padded - n) / 2;

  std::vector<cdouble> v(padded, 0.0);
  for (int k = 0; k < n; ++k) v[k + offset] = hist.counts[k];

  // Gaussian blur kernel in bin units, circular, unit DC gain.
  const double scaled_fwhm = fwhm / slope;
  const double sigma_bins = scaled_fwhm / (2.0 * std::sqrt(2.0 * std::numbers::ln2));
  std::vector<cdouble> kernel(padded, 0.0);
  double ksum = 0.0;
  for (int k = 0; k < padded; ++k) {
    const int dist = std::min(k, padded - k);
    const double g = std::exp(-0.5 * dist * dist / (sigma_bins * sigma_bins));
    kernel[k] = g;
    ksum += g;
  }
  for (auto& k : kernel) k /= ksum;

  const auto vf = dft(v);
  const auto kf = dft(kernel);
  std::vector<cdouble> uf(padded);
  for (int k = 0; k < padded; ++k) uf[k] = vf[k] * std::conj(kf[k]) / (std::norm(kf[k]) + wiener_noise);
  const auto u_complex = idft(uf);
  std::vector<double> u(padded);
  double u_max = 0.0;
  for (int k = 0; k < padded; ++k) {
    u[k] = std::max(0.0, u_complex[k].real());
    u_max = std::max(u_max, u[k]);
  }
  for (auto& val : u)
    if (val < 1e-12 * u_max) val = 0.0;

  // E[u | v] is the posterior mean of the deconvolved distribution under the
  // Gaussian blur; evaluated directly (log domain, no wrap) so it stays
  // finite and monotone in v even where the blur underflows.
  const double lo_center = hist.center(0);
  IntensityMapping mapping;
  mapping.centers.resize(n);
  mapping.expected.resize(n);
  std::vector<double> log_w(padded);
  for (int k = 0; k < n; ++k) {
    const int vk = k + offset;
    double max_log = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < padded; ++j) {
      if (u[j] <= 0.0) {
        log_w[j] = -std::numeric_limits<double>::infinity();
        continue;
      }
      const double d = vk - j;
      log_w[j] = std::log(u[j]) - 0.5 * d * d / (sigma_bins * sigma_bins);
      max_log = std::max(max_log, log_w[j]);
    }
    double num = 0.0;
    double den = 0.0;
    for (int j = 0; j < padded; ++j) {
      if (u[j] <= 0.0) continue;
      const double w = std::exp(log_w[j] - max_log);
      num += w * (lo_center + (j - offset) * slope);
      den += w;
    }
    mapping.centers[k] = hist.center(k);
    mapping.expected[k] = den > 0.0 ? num / den : hist.center(k);
  }
  return mapping;
}

BiasEstimate estimate_bias(const RealImage& img, const RealImage& support_mask, const N4Config& config) {
  validate(config);
  require_same_shape(img, support_mask, "estimate_bias");
  if (!all_finite(img)) throw std::invalid_argument("estimate_bias: non-finite image");
  double in_mask_max = 0.0;
  std::size_t in_mask = 0;
  for (std::size_t i = 0; i < img.size(); ++i) {
    if (img[i] < 0.0) throw std::invalid_argument("estimate_bias: image must be nonnegative");
    if (support_mask[i] > 0.5) {
      ++in_mask;
      in_mask_max = std::max(in_mask_max, img[i]);
    }
  }
  if (in_mask == 0) throw std::invalid_argument("estimate_bias: empty support mask");
  if (!(in_mask_max > 0.0)) throw std::invalid_argument("estimate_bias: image is zero inside the mask");

  // Near-zero pixels are excluded from the histogram and the fit; the
  // spline still assigns them field values.
  const double floor_value = 1e-6 * in_mask_max;
  RealImage weights(img.height(), img.width(), 0.0);
  RealImage log_img(img.height(), img.width(), 0.0);
  std::vector<std::size_t> valid;
  for (std::size_t i = 0; i < img.size(); ++i) {
    if (support_mask[i] > 0.5 && img[i] > floor_value) {
      weights[i] = 1.0;
      log_img[i] = std::log(img[i]);
      valid.push_back(i);
    }
  }

  BiasEstimate result;
  RealImage log_field(img.height(), img.width(), 0.0);
  std::vector<double> corrected(valid.size());
  bool converged = false;
  for (int level = 0; level < config.n_fitting_levels; ++level) {
    const double spacing =
        std::max(2.0, config.control_spacing * std::pow(2.0, config.n_fitting_levels - 1 - level));
    const BSplineFitter fitter(weights, spacing);
    converged = false;
    for (int iter = 0; iter < config.max_iterations; ++iter) {
      ++result.iterations;
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (std::size_t k = 0; k < valid.size(); ++k) {
        corrected[k] = log_img[valid[k]] - log_field[valid[k]];
        lo = std::min(lo, corrected[k]);
        hi = std::max(hi, corrected[k]);
      }
      if (hi - lo <= 1e-12 * std::max(1.0, std::abs(hi))) {
        converged = true;  // flat image: nothing to sharpen
        break;
      }
      const double slope = (hi - lo) / (config.n_bins - 1);
      const Histogram hist = histogram(corrected, config.n_bins, lo - 0.5 * slope, hi + 0.5 * slope);
      const IntensityMapping mapping = sharpen_histogram(hist, config.fwhm, config.wiener_noise);

      RealImage residual(img.height(), img.width(), 0.0);
      for (std::size_t k = 0; k < valid.size(); ++k) residual[valid[k]] = corrected[k] - mapping(corrected[k]);
      const RealImage delta = fitter.smooth(residual);

      // Coefficient of variation of the multiplicative update.
      double sum = 0.0;
      double sum_sq = 0.0;
      for (std::size_t idx : valid) {
        const double r = std::exp(delta[idx]);
        sum += r;
        sum_sq += r * r;
      }
      const double mean = sum / valid.size();
      const double var = std::max(0.0, sum_sq / valid.size() - mean * mean);
      for (std::size_t i = 0; i < log_field.size(); ++i) log_field[i] += delta[i];
      if (std::sqrt(var) / mean < config.convergence_threshold) {
        converged = true;
        break;
      }
    }
  }

  // Outside the fitted pixels the spline only extrapolates; hold it to the
  // range it takes where it was fitted.
  double fit_lo = std::numeric_limits<double>::infinity();
  double fit_hi = -fit_lo;
  for (std::size_t idx : valid) {
    fit_lo = std::min(fit_lo, log_field[idx]);
    fit_hi = std::max(fit_hi, log_field[idx]);
  }
  BiasField field{RealImage(img.height(), img.width()), support_mask};
  for (std::size_t i = 0; i < log_field.size(); ++i) {
    field.field[i] = std::exp(std::clamp(log_field[i], fit_lo, fit_hi));
  }
  result.bias = normalize_field(field);
  result.converged = converged;
  return result;
}

}  // namespace brc
