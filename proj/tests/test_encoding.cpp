#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "brc/encoding/coils.hpp"
#include "brc/encoding/encoding.hpp"
#include "brc/encoding/mask.hpp"
#include "brc/numerics/rng.hpp"
#include "oracles.hpp"

using namespace brc;

namespace {

// Forward model built from the O(N^2) DFT and an explicit index shift.
KSpaceData oracle_E(const ComplexImage& x, const CoilSensitivities& coils, const SamplingMask& mask) {
  const int h = x.height();
  const int w = x.width();
  KSpaceData y;
  y.mask = mask;
  for (const auto& s : coils.maps) {
    ComplexImage weighted(h, w);
    for (std::size_t i = 0; i < x.size(); ++i) weighted[i] = s[i] * x[i];
    const ComplexImage k = oracle::direct_dft(weighted, -1);
    ComplexImage centred(h, w, 0.0);
    for (int r = 0; r < h; ++r) {
      if (!mask.keeps(r)) continue;
      for (int c = 0; c < w; ++c) centred(r, c) = k(((r - h / 2) % h + h) % h, ((c - w / 2) % w + w) % w);
    }
    y.coil_data.push_back(centred);
  }
  return y;
}

KSpaceData random_kspace(const SamplingMask& mask, int n_coils, std::uint64_t seed) {
  KSpaceData y;
  y.mask = mask;
  for (int c = 0; c < n_coils; ++c) {
    ComplexImage k = oracle::random_complex(mask.height, mask.width, seed + c);
    apply_mask(k, mask);
    y.coil_data.push_back(k);
  }
  return y;
}

}  // namespace

TEST_CASE("mask: R = 1 keeps every row") {
  const SamplingMask m = make_mask(32, 8, 1.0, 5, 1);
  CHECK(m.n_kept() == 32);
}

TEST_CASE("mask: row count, centre block, determinism") {
  const SamplingMask m = make_mask(208, 16, 4.0, 15, 7);
  CHECK(m.n_kept() == 52);
  CHECK(center_block_start(208, 15) == 97);
  for (int r = 97; r <= 111; ++r) CHECK(m.keeps(r));
  CHECK(std::is_sorted(m.kept_rows.begin(), m.kept_rows.end()));
  CHECK(make_mask(208, 16, 4.0, 15, 7) == m);
  CHECK(make_mask(208, 16, 4.0, 15, 8).kept_rows != m.kept_rows);
  for (double R : {2.0, 2.5, 3.0, 5.0}) CHECK(make_mask(128, 4, R, 15, 1).n_kept() == std::size_t(std::lround(128 / R)));
}

TEST_CASE("mask: outer rows are drawn without a spatial preference") {
  // Every non-central row should be chosen with probability (52 - 15) / 193.
  std::vector<int> hits(208, 0);
  const int trials = 2000;
  for (int t = 0; t < trials; ++t)
    for (int r : make_mask(208, 4, 4.0, 15, derive_seed(99, t)).kept_rows) ++hits[r];
  const double p = 37.0 / 193.0;
  const double sd = std::sqrt(trials * p * (1 - p));
  int outliers = 0;
  for (int r = 0; r < 208; ++r) {
    if (r >= 97 && r <= 111) continue;
    if (std::abs(hits[r] - trials * p) > 4.0 * sd) ++outliers;
  }
  CHECK(outliers == 0);
}

TEST_CASE("mask: json round trip and bad arguments") {
  const SamplingMask m = make_mask(64, 32, 3.0, 9, 123);
  CHECK(mask_from_json(mask_to_json(m)) == m);
  CHECK_THROWS_AS(make_mask(64, 32, 0.5, 9, 1), std::invalid_argument);
  CHECK_THROWS_AS(make_mask(16, 32, 4.0, 15, 1), std::invalid_argument);
}

TEST_CASE("coils: unit root-sum-of-squares") {
  const CoilSensitivities coils = simulate_coils(24, 20, 4);
  CHECK(coils.n_coils() == 4);
  const RealImage rss = coil_rss(coils);
  for (double v : rss.values()) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
  const CoilSensitivities one = simulate_coils(8, 8, 1);
  for (const auto& v : one.maps[0].values()) CHECK(v == cdouble(1.0, 0.0));
}

TEST_CASE("apply_E / apply_EH match an explicit matrix") {
  const int h = 16, w = 16;
  const CoilSensitivities coils = simulate_coils(h, w, 2);
  const SamplingMask mask = make_mask(h, w, 2.0, 4, 5);
  // Dense E, one column per pixel.
  const int n = h * w;
  Eigen::MatrixXcd E(2 * n, n);
  for (int j = 0; j < n; ++j) {
    ComplexImage e(h, w, 0.0);
    e[j] = 1.0;
    const KSpaceData col = oracle_E(e, coils, mask);
    for (int c = 0; c < 2; ++c)
      for (int i = 0; i < n; ++i) E(c * n + i, j) = col.coil_data[c][i];
  }
  const ComplexImage x = oracle::random_complex(h, w, 11);
  Eigen::VectorXcd xv(n);
  for (int i = 0; i < n; ++i) xv(i) = x[i];
  const Eigen::VectorXcd ex = E * xv;
  const KSpaceData y = apply_E(x, coils, mask);
  double err = 0.0;
  for (int c = 0; c < 2; ++c)
    for (int i = 0; i < n; ++i) err = std::max(err, std::abs(y.coil_data[c][i] - ex(c * n + i)));
  CHECK(err < 1e-12);

  const KSpaceData yr = random_kspace(mask, 2, 20);
  Eigen::VectorXcd yv(2 * n);
  for (int c = 0; c < 2; ++c)
    for (int i = 0; i < n; ++i) yv(c * n + i) = yr.coil_data[c][i];
  const Eigen::VectorXcd ehy = E.adjoint() * yv;
  const ComplexImage got = apply_EH(yr, coils);
  double err_h = 0.0;
  for (int i = 0; i < n; ++i) err_h = std::max(err_h, std::abs(got[i] - ehy(i)));
  CHECK(err_h < 1e-12);
}

TEST_CASE("apply_E: DC of a constant lands at the centre") {
  const SamplingMask full = make_mask(8, 6, 1.0, 0, 0);
  const KSpaceData y = apply_E(ComplexImage(8, 6, 2.0), uniform_coil(8, 6), full);
  CHECK(std::abs(y.coil_data[0](4, 3) - cdouble(2.0 * std::sqrt(48.0), 0.0)) < 1e-12);
}

TEST_CASE("adjoint identity over random trials") {
  Rng rng(3);
  for (int t = 0; t < 100; ++t) {
    const int n_coils = 1 + static_cast<int>(rng.below(4));
    const double R = 2.0 + static_cast<double>(rng.below(4));
    const CoilSensitivities coils = simulate_coils(32, 24, n_coils);
    const SamplingMask mask = make_mask(32, 24, R, 4, rng.next_u64());
    const ComplexImage x = oracle::random_complex(32, 24, rng.next_u64());
    const KSpaceData y = random_kspace(mask, n_coils, rng.next_u64());
    const cdouble lhs = inner(apply_E(x, coils, mask), y);
    const cdouble rhs = inner(x, apply_EH(y, coils));
    CHECK(std::abs(lhs - rhs) <= 1e-10 * norm2(x) * norm2(y));
  }
}

TEST_CASE("E^H E is the identity for full sampling and RSS-normalized coils") {
  const CoilSensitivities coils = simulate_coils(20, 18, 3);
  const SamplingMask full = make_mask(20, 18, 1.0, 0, 0);
  const ComplexImage x = oracle::random_complex(20, 18, 4);
  CHECK(max_abs_diff(apply_EH(apply_E(x, coils, full), coils), x) < 1e-12);
}

TEST_CASE("zero image gives zero k-space") {
  const CoilSensitivities coils = simulate_coils(8, 8, 2);
  const SamplingMask mask = make_mask(8, 8, 2.0, 2, 1);
  CHECK(norm2(apply_E(ComplexImage(8, 8, 0.0), coils, mask)) == 0.0);
}

TEST_CASE("apply_EH ignores rows outside the mask") {
  const SamplingMask mask = make_mask(16, 8, 2.0, 2, 9);
  KSpaceData y = random_kspace(mask, 1, 50);
  const ComplexImage before = apply_EH(y, uniform_coil(16, 8));
  for (int r = 0; r < 16; ++r)
    if (!mask.keeps(r))
      for (int c = 0; c < 8; ++c) y.coil_data[0](r, c) = 5.0;
  CHECK(max_abs_diff(apply_EH(y, uniform_coil(16, 8)), before) == 0.0);
}
