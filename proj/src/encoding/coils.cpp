#include "brc/encoding/coils.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace brc {

CoilSensitivities uniform_coil(int height, int width) {
  return CoilSensitivities{{ComplexImage(height, width, cdouble(1.0, 0.0))}};
}

CoilSensitivities simulate_coils(int height, int width, int n_coils) {
  if (n_coils < 1) throw std::invalid_argument("simulate_coils: n_coils must be >= 1");
  if (n_coils == 1) return uniform_coil(height, width);

  const double cy = 0.5 * (height - 1);
  const double cx = 0.5 * (width - 1);
  const double spread = 0.6 * std::max(height, width);
  CoilSensitivities coils;
  for (int k = 0; k < n_coils; ++k) {
    const double angle = 2.0 * std::numbers::pi * k / n_coils;
    const double py = cy + 0.5 * height * std::sin(angle);
    const double px = cx + 0.5 * width * std::cos(angle);
    ComplexImage map(height, width);
    for (int r = 0; r < height; ++r) {
      for (int c = 0; c < width; ++c) {
        const double dy = r - py;
        const double dx = c - px;
        const double mag = std::exp(-(dx * dx + dy * dy) / (2.0 * spread * spread));
        // Slow phase ramp pointing away from the coil, plus a per-coil offset.
        const double phase = angle + 0.5 * std::numbers::pi * (dx * std::cos(angle) + dy * std::sin(angle)) /
                                         std::max(height, width);
        map(r, c) = std::polar(mag, phase);
      }
    }
    coils.maps.push_back(std::move(map));
  }
  const RealImage rss = coil_rss(coils);
  for (auto& map : coils.maps)
    for (std::size_t i = 0; i < map.size(); ++i) map[i] /= rss[i];
  return coils;
}

RealImage coil_rss(const CoilSensitivities& coils) {
  if (coils.maps.empty()) throw std::invalid_argument("coil_rss: no coils");
  RealImage rss(coils.height(), coils.width(), 0.0);
  for (const auto& map : coils.maps) {
    require_same_shape(map, rss, "coil_rss");
    for (std::size_t i = 0; i < map.size(); ++i) rss[i] += std::norm(map[i]);
  }
  for (auto& v : rss.values()) v = std::sqrt(v);
  return rss;
}

}  // namespace brc
