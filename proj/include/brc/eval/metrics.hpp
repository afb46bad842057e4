#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "brc/numerics/image.hpp"

namespace brc {

/// 100 * sqrt(sum (|recon| - |ref|)^2 / sum |ref|^2) over pixels with mask > 0.5.
double rmse_percent(const ComplexImage& recon, const ComplexImage& reference, const RealImage& mask);

/// Paired sign-flip permutation test on the mean difference a - b,
/// two-sided, p = (1 + #{|perm| >= |observed|}) / (1 + n_perm). Permutation
/// k draws its signs from derive_seed(seed, k), so the result does not
/// depend on evaluation order or thread count.
double permutation_test(std::span<const double> a, std::span<const double> b, int n_perm = 10000,
                        std::uint64_t seed = 0);

/// Exact two-sided sign-flip p-value over all 2^n sign patterns (n <= 24),
/// without the add-one correction.
double exact_sign_flip_p(std::span<const double> a, std::span<const double> b);

struct MethodSummary {
  std::string method;
  std::vector<double> rmse;  // per sample
  double mean = 0.0;
  double stddev = 0.0;       // sample std (n - 1)
};

MethodSummary summarize(const std::string& method, std::vector<double> rmse);

}  // namespace brc
