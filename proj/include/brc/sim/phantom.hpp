#pragma once

#include <cstdint>
#include <vector>

#include "brc/numerics/image.hpp"

namespace brc {

struct PhantomSpec {
  int height = 128;
  int width = 128;
  int n_tissues = 3;
  /// One level per tissue, distinct, in [0, 1]. Tissue 0 fills the brain,
  /// tissue 1 the deformed inner region, tissue 2 the ventricles, higher
  /// tissues small blobs inside the inner region.
  std::vector<double> tissue_levels = {0.55, 0.85, 0.25};
  std::uint64_t seed = 0;
  /// Std of smooth per-tissue texture, relative to the tissue level.
  double texture_amplitude = 0.0;
  /// Smooth low-order polynomial phase of at most pi/4.
  bool complex_phase = false;
  /// Gaussian blur in pixels between tissues (partial-volume edges);
  /// the brain boundary stays sharp.
  double edge_blur = 0.0;
};

void validate(const PhantomSpec& spec);

struct Phantom {
  ComplexImage image;
  RealImage brain_mask;  // 1 inside the brain, 0 outside
  RealImage labels;      // tissue index, -1 outside the brain
};

/// Brain-like piecewise-smooth phantom: nested deformed ellipses plus
/// ventricles and blobs. Deterministic per seed; intensities in [0, 1].
Phantom make_phantom(const PhantomSpec& spec);

}  // namespace brc
