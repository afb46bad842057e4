#include "brc/prior/patch_grid.hpp"

#include <stdexcept>

namespace brc {
namespace {

std::vector<int> axis_origins(int n, int patch, int stride) {
  std::vector<int> origins;
  for (int o = 0; o + patch <= n; o += stride) origins.push_back(o);
  if (origins.back() + patch < n) origins.push_back(n - patch);
  return origins;
}

}  // namespace

PatchGrid make_patch_grid(int height, int width, int patch_size, int stride) {
  if (patch_size < 1 || stride < 1) throw std::invalid_argument("patch grid: patch_size and stride must be >= 1");
  if (height < patch_size || width < patch_size) {
    throw std::invalid_argument("patch grid: image smaller than one patch");
  }
  PatchGrid grid;
  grid.height = height;
  grid.width = width;
  grid.patch_size = patch_size;
  grid.stride = stride;
  grid.coverage = RealImage(height, width, 0.0);
  for (int r : axis_origins(height, patch_size, stride)) {
    for (int c : axis_origins(width, patch_size, stride)) {
      grid.origins.emplace_back(r, c);
      for (int i = 0; i < patch_size; ++i)
        for (int j = 0; j < patch_size; ++j) grid.coverage(r + i, c + j) += 1.0;
    }
  }
  return grid;
}

Eigen::MatrixXd extract_patches(const RealImage& img, const PatchGrid& grid) {
  if (img.height() != grid.height || img.width() != grid.width) {
    throw std::invalid_argument("extract_patches: image does not match grid");
  }
  const int ps = grid.patch_size;
  Eigen::MatrixXd patches(ps * ps, grid.n_patches());
  for (int p = 0; p < grid.n_patches(); ++p) {
    const auto [r0, c0] = grid.origins[p];
    for (int i = 0; i < ps; ++i)
      for (int j = 0; j < ps; ++j) patches(i * ps + j, p) = img(r0 + i, c0 + j);
  }
  return patches;
}

RealImage assemble_patches(const Eigen::MatrixXd& patches, const PatchGrid& grid) {
  const int ps = grid.patch_size;
  if (patches.rows() != ps * ps || patches.cols() != grid.n_patches()) {
    throw std::invalid_argument("assemble_patches: patch matrix does not match grid");
  }
  RealImage out(grid.height, grid.width, 0.0);
  for (int p = 0; p < grid.n_patches(); ++p) {
    const auto [r0, c0] = grid.origins[p];
    for (int i = 0; i < ps; ++i)
      for (int j = 0; j < ps; ++j) out(r0 + i, c0 + j) += patches(i * ps + j, p);
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i] /= grid.coverage[i];
  return out;
}

}  // namespace brc
