#include "brc/encoding/mask.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "brc/numerics/rng.hpp"

namespace brc {

bool SamplingMask::keeps(int row) const { return std::binary_search(kept_rows.begin(), kept_rows.end(), row); }

std::vector<char> SamplingMask::row_flags() const {
  std::vector<char> flags(height, 0);
  for (int r : kept_rows) flags[r] = 1;
  return flags;
}

int center_block_start(int height, int n_center) { return height / 2 - n_center / 2; }

SamplingMask make_mask(int height, int width, double R, int n_center, std::uint64_t seed) {
  if (height < 1 || width < 1) throw std::invalid_argument("make_mask: dimensions must be >= 1");
  if (!(R >= 1.0) || !std::isfinite(R)) throw std::invalid_argument("make_mask: R must be >= 1");
  if (n_center < 0 || n_center > height) throw std::invalid_argument("make_mask: n_center must be in [0, height]");
  const int n_keep = static_cast<int>(std::lround(height / R));
  if (n_keep < n_center || n_keep < 1) {
    throw std::invalid_argument("make_mask: round(height/R) = " + std::to_string(n_keep) +
                                " is smaller than the central block of " + std::to_string(n_center) + " rows");
  }

  SamplingMask mask;
  mask.height = height;
  mask.width = width;
  mask.R = R;
  mask.seed = seed;

  std::vector<char> keep(height, 0);
  const int start = center_block_start(height, n_center);
  for (int r = start; r < start + n_center; ++r) keep[r] = 1;

  std::vector<int> candidates;
  for (int r = 0; r < height; ++r)
    if (!keep[r]) candidates.push_back(r);
  // Partial Fisher-Yates: the first n_extra entries become a uniform sample.
  Rng rng(seed);
  const int n_extra = n_keep - n_center;
  for (int i = 0; i < n_extra; ++i) {
    const auto j = i + static_cast<int>(rng.below(candidates.size() - i));
    std::swap(candidates[i], candidates[j]);
    keep[candidates[i]] = 1;
  }
  for (int r = 0; r < height; ++r)
    if (keep[r]) mask.kept_rows.push_back(r);
  return mask;
}

nlohmann::json mask_to_json(const SamplingMask& mask) {
  return nlohmann::json{{"height", mask.height},
                        {"width", mask.width},
                        {"R", mask.R},
                        {"seed", mask.seed},
                        {"kept_rows", mask.kept_rows}};
}

SamplingMask mask_from_json(const nlohmann::json& j) {
  SamplingMask mask;
  mask.height = j.at("height").get<int>();
  mask.width = j.at("width").get<int>();
  mask.R = j.at("R").get<double>();
  mask.seed = j.at("seed").get<std::uint64_t>();
  mask.kept_rows = j.at("kept_rows").get<std::vector<int>>();
  if (mask.kept_rows.empty()) throw std::invalid_argument("mask: kept_rows is empty");
  if (!std::is_sorted(mask.kept_rows.begin(), mask.kept_rows.end()) ||
      std::adjacent_find(mask.kept_rows.begin(), mask.kept_rows.end()) != mask.kept_rows.end()) {
    throw std::invalid_argument("mask: kept_rows must be sorted and unique");
  }
  if (mask.kept_rows.front() < 0 || mask.kept_rows.back() >= mask.height) {
    throw std::invalid_argument("mask: kept row out of range");
  }
  return mask;
}

}  // namespace brc
