#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "brc/numerics/image.hpp"

namespace brc {

/// Regular grid of overlapping square patches covering an image. Along
/// each axis origins step by stride; a final origin flush with the border
/// is added when the stride does not land there.
struct PatchGrid {
  int height = 0;
  int width = 0;
  int patch_size = 0;
  int stride = 0;
  std::vector<std::pair<int, int>> origins;  // (row, col)
  RealImage coverage;                        // patches covering each pixel, >= 1

  int n_patches() const { return static_cast<int>(origins.size()); }
};

PatchGrid make_patch_grid(int height, int width, int patch_size, int stride);

/// Patches as columns (row-major within each patch).
Eigen::MatrixXd extract_patches(const RealImage& img, const PatchGrid& grid);

/// Sum patch columns back into an image and divide by coverage.
RealImage assemble_patches(const Eigen::MatrixXd& patches, const PatchGrid& grid);

}  // namespace brc
