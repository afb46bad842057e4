#pragma once

#include <filesystem>

#include "brc/numerics/image.hpp"

namespace brc {

struct Window {
  double lo = 0.0;
  double hi = 1.2;
};

/// Display windows: MR magnitudes and bias fields.
inline constexpr Window kImageWindow{0.0, 1.2};
inline constexpr Window kBiasWindow{0.5, 1.8};

/// 8-bit grayscale PNG of img clipped to the window. Visualization only.
void write_png(const std::filesystem::path& path, const RealImage& img, Window window);

}  // namespace brc
