#include "brc/sim/bias_synth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "brc/numerics/bspline.hpp"
#include "brc/numerics/filter.hpp"
#include "brc/numerics/rng.hpp"

namespace brc {
namespace {

void standardize(RealImage& img, const RealImage& mask) {
  const double mean = masked_mean(img, mask);
  double sq = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < img.size(); ++i) {
    img[i] -= mean;
    if (mask[i] > 0.5) {
      sq += img[i] * img[i];
      ++n;
    }
  }
  const double sd = std::sqrt(sq / n);
  if (sd > 0.0)
    for (auto& v : img.values()) v /= sd;
}

double max_deviation(const RealImage& log_field, double scale, const RealImage& mask) {
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < log_field.size(); ++i) {
    if (mask[i] > 0.5) {
      sum += std::exp(scale * log_field[i]);
      ++n;
    }
  }
  const double mean = sum / n;
  double dev = 0.0;
  for (std::size_t i = 0; i < log_field.size(); ++i) {
    if (mask[i] > 0.5) dev = std::max(dev, std::abs(std::exp(scale * log_field[i]) / mean - 1.0));
  }
  return dev;
}

}  // namespace

void validate(const BiasSynthConfig& cfg) {
  if (!(cfg.amplitude > 0.0 && cfg.amplitude < 0.5)) throw std::invalid_argument("bias synth: amplitude must be in (0, 0.5)");
  if (!(cfg.length_scale > 0.0)) throw std::invalid_argument("bias synth: length_scale must be > 0");
  if (!(cfg.control_spacing >= 2.0)) throw std::invalid_argument("bias synth: control_spacing must be >= 2");
  if (!(cfg.center_weight >= 0.0 && cfg.center_weight <= 1.0)) {
    throw std::invalid_argument("bias synth: center_weight must be in [0, 1]");
  }
}

BiasField synth_bias(const BiasSynthConfig& cfg, const RealImage& mask) {
  validate(cfg);
  if (mask_count(mask) == 0) throw std::invalid_argument("bias synth: empty mask");
  const int h = mask.height();
  const int w = mask.width();

  Rng rng(derive_seed(cfg.seed, 0x42494153ULL));
  RealImage noise(h, w);
  for (auto& v : noise.values()) v = rng.normal();
  RealImage random_part = lowpass_gaussian(noise, cfg.length_scale);
  standardize(random_part, mask);

  RealImage log_field = random_part;
  if (cfg.center_weight > 0.0) {
    RealImage radial(h, w);
    const double cy = 0.5 * (h - 1);
    const double cx = 0.5 * (w - 1);
    for (int r = 0; r < h; ++r) {
      for (int c = 0; c < w; ++c) {
        const double dy = (r - cy) / (0.5 * h);
        const double dx = (c - cx) / (0.5 * w);
        radial(r, c) = -(dy * dy + dx * dx);
      }
    }
    standardize(radial, mask);
    for (std::size_t i = 0; i < log_field.size(); ++i) {
      log_field[i] = (1.0 - cfg.center_weight) * random_part[i] + cfg.center_weight * radial[i];
    }
  }
  log_field = bspline_smooth(log_field, RealImage(h, w, 1.0), cfg.control_spacing);
  const double mean = masked_mean(log_field, mask);
  for (auto& v : log_field.values()) v -= mean;

  // Bisection for the scale that yields max |B - 1| = amplitude in the mask.
  double lo = 0.0;
  double hi = 1.0;
  while (max_deviation(log_field, hi, mask) < cfg.amplitude) {
    hi *= 2.0;
    if (hi > 1e6) throw std::runtime_error("bias synth: log-field is flat, cannot reach amplitude");
  }
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (max_deviation(log_field, mid, mask) < cfg.amplitude ? lo : hi) = mid;
  }
  const double scale = 0.5 * (lo + hi);

  BiasField out{RealImage(h, w), mask};
  for (std::size_t i = 0; i < log_field.size(); ++i) out.field[i] = std::exp(scale * log_field[i]);
  return normalize_field(out);
}

BiasField synth_bias(const BiasSynthConfig& cfg, int height, int width) {
  return synth_bias(cfg, RealImage(height, width, 1.0));
}

BiasField reciprocal_field(const BiasField& bias) {
  BiasField out = bias;
  for (auto& v : out.field.values()) {
    if (!(v > 0.0)) throw std::invalid_argument("reciprocal_field: field must be strictly positive");
    v = 1.0 / v;
  }
  return normalize_field(out);
}

}  // namespace brc
