#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "brc/encoding/coils.hpp"
#include "brc/numerics/bspline.hpp"
#include "brc/numerics/histogram.hpp"
#include "brc/sim/acquisition.hpp"
#include "brc/sim/bias_synth.hpp"
#include "brc/sim/phantom.hpp"
#include "oracles.hpp"

using namespace brc;

TEST_CASE("phantom: deterministic, bounded, masked") {
  PhantomSpec spec;
  spec.seed = 3;
  spec.texture_amplitude = 0.05;
  spec.complex_phase = true;
  spec.edge_blur = 1.5;
  const Phantom a = make_phantom(spec);
  const Phantom b = make_phantom(spec);
  CHECK(a.image == b.image);
  CHECK(a.brain_mask == b.brain_mask);
  spec.seed = 4;
  CHECK(!(make_phantom(spec).image == a.image));
  CHECK(mask_count(a.brain_mask) > 0);
  for (std::size_t i = 0; i < a.image.size(); ++i) {
    const double m = std::abs(a.image[i]);
    CHECK((m >= 0.0 && m <= 1.0));
    if (a.brain_mask[i] < 0.5) CHECK(m == 0.0);
  }
}

TEST_CASE("phantom: three tissues give three histogram modes at the levels") {
  PhantomSpec spec;
  spec.seed = 5;
  const Phantom p = make_phantom(spec);
  std::vector<double> vals;
  for (std::size_t i = 0; i < p.image.size(); ++i)
    if (p.brain_mask[i] > 0.5) vals.push_back(std::abs(p.image[i]));
  const Histogram h = histogram(vals, 50, 0.0, 1.0);
  std::vector<double> modes;
  for (int k = 0; k < h.n_bins(); ++k) {
    const double left = k > 0 ? h.counts[k - 1] : 0.0;
    const double right = k + 1 < h.n_bins() ? h.counts[k + 1] : 0.0;
    if (h.counts[k] > left && h.counts[k] >= right && h.counts[k] > 0.01 * vals.size()) modes.push_back(h.center(k));
  }
  REQUIRE(modes.size() == 3);
  std::vector<double> levels = spec.tissue_levels;
  std::sort(levels.begin(), levels.end());
  for (int i = 0; i < 3; ++i) CHECK(std::abs(modes[i] - levels[i]) <= h.bin_width());
}

TEST_CASE("phantom: bad specs are rejected") {
  PhantomSpec spec;
  spec.tissue_levels = {0.5, 0.5, 0.2};
  CHECK_THROWS(make_phantom(spec));
  spec = PhantomSpec{};
  spec.n_tissues = 2;
  CHECK_THROWS(make_phantom(spec));  // level count mismatch
  spec = PhantomSpec{};
  spec.height = 4;
  CHECK_THROWS(make_phantom(spec));
}

TEST_CASE("synth_bias: amplitude, limit, spline membership") {
  PhantomSpec ps;
  ps.seed = 6;
  const RealImage mask = make_phantom(ps).brain_mask;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    BiasSynthConfig cfg;
    cfg.amplitude = 0.15;
    cfg.seed = seed;
    const BiasField b = synth_bias(cfg, mask);
    double dev = 0.0;
    for (std::size_t i = 0; i < mask.size(); ++i)
      if (mask[i] > 0.5) dev = std::max(dev, std::abs(b.field[i] - 1.0));
    CHECK((dev >= 0.10 && dev <= 0.20));
    CHECK(std::abs(masked_mean(b.field, mask) - 1.0) < 1e-12);

    RealImage log_field(mask.height(), mask.width());
    for (std::size_t i = 0; i < mask.size(); ++i) log_field[i] = std::log(b.field[i]);
    const RealImage refit = bspline_smooth(log_field, RealImage(mask.height(), mask.width(), 1.0), cfg.control_spacing);
    CHECK(max_abs_diff(refit, log_field) < 1e-6);
  }
  BiasSynthConfig tiny;
  tiny.amplitude = 1e-6;
  const BiasField flat = synth_bias(tiny, mask);
  for (double v : flat.field.values()) CHECK(std::abs(v - 1.0) < 1e-5);
  tiny.amplitude = 0.6;
  CHECK_THROWS(synth_bias(tiny, mask));
}

TEST_CASE("reciprocal_field inverts and renormalizes") {
  BiasSynthConfig cfg;
  cfg.seed = 7;
  const BiasField b = synth_bias(cfg, 64, 64);
  const BiasField r = reciprocal_field(b);
  CHECK(std::abs(masked_mean(r.field, r.support_mask) - 1.0) < 1e-12);
  const double k = r.field[0] * b.field[0];
  for (std::size_t i = 0; i < b.field.size(); ++i) CHECK(r.field[i] * b.field[i] == doctest::Approx(k).epsilon(1e-12));
}

TEST_CASE("acquisition: noiseless model, noise level, linearity") {
  const CoilSensitivities coils = simulate_coils(100, 100, 2);
  const SamplingMask full = make_mask(100, 100, 1.0, 0, 0);
  const ComplexImage x = oracle::random_complex(100, 100, 8);
  const RealImage b = oracle::random_real(100, 100, 9, 0.8, 1.2);
  const KSpaceData clean = simulate_acquisition(x, b, coils, full, {});
  const KSpaceData expected = apply_E(multiply(x, b), coils, full);
  CHECK(norm2(subtract(clean, expected)) == 0.0);

  const KSpaceData noisy = simulate_acquisition(x, b, coils, full, {.sigma = 0.3, .seed = 10});
  // 2 coils x 100 x 100 = 20,000 sampled points.
  const double emp = norm2(subtract(noisy, clean)) / std::sqrt(20000.0);
  CHECK(std::abs(emp - 0.3) <= 0.03 * 0.3);
  CHECK(norm2(subtract(noisy, simulate_acquisition(x, b, coils, full, {.sigma = 0.3, .seed = 10}))) == 0.0);

  const SamplingMask under = make_mask(100, 100, 4.0, 10, 11);
  const KSpaceData y_noisy = simulate_acquisition(x, b, coils, under, {.sigma = 0.3, .seed = 12});
  for (int r = 0; r < 100; ++r)
    if (!under.keeps(r))
      for (int c = 0; c < 100; ++c) CHECK(y_noisy.coil_data[1](r, c) == cdouble(0.0, 0.0));

  const ComplexImage x2 = oracle::random_complex(100, 100, 13);
  const cdouble s(0.3, -1.1);
  const KSpaceData lhs = simulate_acquisition(x + s * x2, b, coils, under, {});
  KSpaceData rhs = simulate_acquisition(x, b, coils, under, {});
  const KSpaceData part = simulate_acquisition(x2, b, coils, under, {});
  for (int c = 0; c < 2; ++c) rhs.coil_data[c] = rhs.coil_data[c] + s * part.coil_data[c];
  CHECK(norm2(subtract(lhs, rhs)) < 1e-10 * norm2(lhs));
  CHECK_THROWS(simulate_acquisition(x, RealImage(10, 10, 1.0), coils, under, {}));
}
