#include "brc/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "brc/numerics/parallel.hpp"
#include "brc/numerics/rng.hpp"

namespace brc {

double rmse_percent(const ComplexImage& recon, const ComplexImage& reference, const RealImage& mask) {
  require_same_shape(recon, reference, "rmse_percent");
  require_same_shape(recon, mask, "rmse_percent");
  double err = 0.0;
  double energy = 0.0;
  for (std::size_t i = 0; i < recon.size(); ++i) {
    if (mask[i] <= 0.5) continue;
    const double ref = std::abs(reference[i]);
    const double d = std::abs(recon[i]) - ref;
    err += d * d;
    energy += ref * ref;
  }
  if (!(energy > 0.0)) throw std::invalid_argument("rmse_percent: reference has zero energy inside the mask");
  return 100.0 * std::sqrt(err / energy);
}

namespace {

std::vector<double> paired_differences(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("permutation test: length mismatch");
  if (a.size() < 2) throw std::invalid_argument("permutation test: need at least 2 pairs");
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return d;
}

// |perm| >= |observed| up to rounding in the summation order.
bool at_least_as_extreme(double perm, double observed) {
  return std::abs(perm) >= std::abs(observed) * (1.0 - 1e-12);
}

}  // namespace

double permutation_test(std::span<const double> a, std::span<const double> b, int n_perm, std::uint64_t seed) {
  const auto d = paired_differences(a, b);
  if (n_perm < 1) throw std::invalid_argument("permutation test: n_perm must be >= 1");
  const double n = static_cast<double>(d.size());
  const double observed = std::accumulate(d.begin(), d.end(), 0.0) / n;

  std::vector<char> extreme(n_perm, 0);
  parallel_for(static_cast<std::size_t>(n_perm), [&](std::size_t k) {
    Rng rng(derive_seed(seed, k));
    double sum = 0.0;
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (i % 64 == 0) bits = rng.next_u64();
      sum += (bits & 1ULL) ? d[i] : -d[i];
      bits >>= 1;
    }
    extreme[k] = at_least_as_extreme(sum / n, observed);
  });
  const auto count = std::count(extreme.begin(), extreme.end(), 1);
  return (1.0 + static_cast<double>(count)) / (1.0 + n_perm);
}

double exact_sign_flip_p(std::span<const double> a, std::span<const double> b) {
  const auto d = paired_differences(a, b);
  if (d.size() > 24) throw std::invalid_argument("exact_sign_flip_p: at most 24 pairs");
  const double n = static_cast<double>(d.size());
  const double observed = std::accumulate(d.begin(), d.end(), 0.0) / n;
  const std::uint64_t patterns = 1ULL << d.size();
  std::uint64_t count = 0;
  for (std::uint64_t s = 0; s < patterns; ++s) {
    double sum = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) sum += ((s >> i) & 1ULL) ? d[i] : -d[i];
    count += at_least_as_extreme(sum / n, observed);
  }
  return static_cast<double>(count) / static_cast<double>(patterns);
}

MethodSummary summarize(const std::string& method, std::vector<double> rmse) {
  MethodSummary s;
  s.method = method;
  s.rmse = std::move(rmse);
  if (s.rmse.empty()) return s;
  s.mean = std::accumulate(s.rmse.begin(), s.rmse.end(), 0.0) / s.rmse.size();
  if (s.rmse.size() > 1) {
    double sq = 0.0;
    for (double v : s.rmse) sq += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(sq / (s.rmse.size() - 1));
  }
  return s;
}

}  // namespace brc
