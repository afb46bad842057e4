#include "brc/numerics/histogram.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace brc {

double Histogram::total() const { return std::accumulate(counts.begin(), counts.end(), 0.0); }

Histogram histogram(std::span<const double> values, int n_bins, double lo, double hi) {
  if (values.empty()) throw std::invalid_argument("histogram: empty input");
  if (n_bins < 2) throw std::invalid_argument("histogram: n_bins must be >= 2");
  if (!(lo < hi)) throw std::invalid_argument("histogram: lo must be < hi");

  Histogram h;
  h.bin_edges.resize(n_bins + 1);
  const double width = (hi - lo) / n_bins;
  for (int i = 0; i <= n_bins; ++i) h.bin_edges[i] = lo + i * width;
  h.bin_edges[n_bins] = hi;
  h.counts.assign(n_bins, 0.0);

  for (double v : values) {
    if (!(v >= lo && v <= hi)) continue;
    const double pos = (v - lo) / width - 0.5;  // in units of bin centers
    if (pos <= 0.0) {
      h.counts.front() += 1.0;
    } else if (pos >= n_bins - 1) {
      h.counts.back() += 1.0;
    } else {
      const int i = static_cast<int>(std::floor(pos));
      const double f = pos - i;
      h.counts[i] += 1.0 - f;
      h.counts[i + 1] += f;
    }
  }
  return h;
}

}  // namespace brc
