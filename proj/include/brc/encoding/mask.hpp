#pragma once

#include <cstdint>
#include <vector>

#include <nlohmann/json.hpp>

namespace brc {

/// Cartesian undersampling pattern: whole phase-encode rows are kept or skipped.
struct SamplingMask {
  int height = 0;
  int width = 0;
  double R = 1.0;
  std::uint64_t seed = 0;
  std::vector<int> kept_rows;  // sorted, unique

  bool keeps(int row) const;
  /// Per-row flags, size height.
  std::vector<char> row_flags() const;
  std::size_t n_kept() const { return kept_rows.size(); }

  bool operator==(const SamplingMask&) const = default;
};

/// Keeps the n_center central rows and round(height / R) rows in total; the
/// remaining rows are drawn uniformly without replacement.
SamplingMask make_mask(int height, int width, double R, int n_center, std::uint64_t seed);

/// First row of the central block of n_center rows.
int center_block_start(int height, int n_center);

nlohmann::json mask_to_json(const SamplingMask& mask);
SamplingMask mask_from_json(const nlohmann::json& j);

}  // namespace brc
