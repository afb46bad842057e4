#pragma once

#include <span>
#include <vector>

namespace brc {

struct Histogram {
  std::vector<double> bin_edges;  // n_bins + 1, increasing
  std::vector<double> counts;     // n_bins

  int n_bins() const { return static_cast<int>(counts.size()); }
  double bin_width() const { return bin_edges[1] - bin_edges[0]; }
  double center(int bin) const { return 0.5 * (bin_edges[bin] + bin_edges[bin + 1]); }
  double total() const;
};

/// Linear binning on [lo, hi] with triangular sharing between the two
/// nearest bin centers. Values outside [lo, hi] are dropped; values between
/// an outer edge and the outermost center go entirely to the outer bin.
Histogram histogram(std::span<const double> values, int n_bins, double lo, double hi);

}  // namespace brc
