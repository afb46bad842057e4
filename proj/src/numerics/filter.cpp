#include "brc/numerics/filter.hpp"

#include <cmath>
#include <stdexcept>

namespace brc {

std::vector<double> gaussian_kernel(double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("gaussian_kernel: sigma must be positive");
  const int radius = std::max(1, static_cast<int>(std::ceil(4.0 * sigma)));
  std::vector<double> taps(2 * radius + 1);
  double sum = 0.0;
  for (int k = -radius; k <= radius; ++k) {
    const double v = std::exp(-0.5 * (k * k) / (sigma * sigma));
    taps[k + radius] = v;
    sum += v;
  }
  for (auto& t : taps) t /= sum;
  return taps;
}

int reflect_index(int i, int n) {
  const int period = 2 * n;
  int m = i % period;
  if (m < 0) m += period;
  return m < n ? m : period - 1 - m;
}

RealImage lowpass_gaussian(const RealImage& img, double sigma) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("lowpass_gaussian: sigma must be >= 0");
  if (sigma == 0.0) return img;
  const auto taps = gaussian_kernel(sigma);
  const int radius = static_cast<int>(taps.size() / 2);
  const int h = img.height();
  const int w = img.width();

  RealImage rows(h, w);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) acc += taps[k + radius] * img(r, reflect_index(c + k, w));
      rows(r, c) = acc;
    }
  }
  RealImage out(h, w);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) acc += taps[k + radius] * rows(reflect_index(r + k, h), c);
      out(r, c) = acc;
    }
  }
  return out;
}

}  // namespace brc
