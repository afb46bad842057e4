#pragma once

#include <vector>

#include "brc/numerics/image.hpp"

namespace brc {

struct CoilSensitivities {
  std::vector<ComplexImage> maps;

  int n_coils() const { return static_cast<int>(maps.size()); }
  int height() const { return maps.front().height(); }
  int width() const { return maps.front().width(); }
};

/// Single coil with unit sensitivity everywhere.
CoilSensitivities uniform_coil(int height, int width);

/// n_coils smooth complex Gaussian-profile maps centered at equally spaced
/// points on the image border, normalized to unit root-sum-of-squares.
/// n_coils == 1 gives uniform_coil.
CoilSensitivities simulate_coils(int height, int width, int n_coils);

/// Root-sum-of-squares of the coil maps.
RealImage coil_rss(const CoilSensitivities& coils);

}  // namespace brc
