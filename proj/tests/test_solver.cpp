#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "brc/encoding/coils.hpp"
#include "brc/encoding/encoding.hpp"
#include "brc/encoding/mask.hpp"
#include "brc/numerics/fft.hpp"
#include "brc/prior/vae.hpp"
#include "brc/sim/acquisition.hpp"
#include "brc/sim/phantom.hpp"
#include "brc/solver/projections.hpp"
#include "brc/solver/reconstruct.hpp"
#include "oracles.hpp"

using namespace brc;

namespace {

KSpaceData random_measurement(const EncodingContext& enc, std::uint64_t seed) {
  KSpaceData y;
  y.mask = enc.mask;
  for (int c = 0; c < enc.coils.n_coils(); ++c) {
    ComplexImage k = oracle::random_complex(enc.mask.height, enc.mask.width, seed + c);
    apply_mask(k, enc.mask);
    y.coil_data.push_back(k);
  }
  return y;
}

double masked_rmse_percent(const ComplexImage& a, const ComplexImage& truth, const RealImage& mask) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (mask[i] <= 0.5) continue;
    num += std::norm(std::abs(a[i]) - std::abs(truth[i]));
    den += std::norm(truth[i]);
  }
  return 100.0 * std::sqrt(num / den);
}

}  // namespace

TEST_CASE("p_dc: consistent input is a fixed point") {
  const EncodingContext enc{simulate_coils(24, 24, 3), make_mask(24, 24, 3.0, 4, 1)};
  const ComplexImage x = oracle::random_complex(24, 24, 2);
  const KSpaceData y = apply_E(x, enc.coils, enc.mask);
  CHECK(max_abs_diff(p_dc(x, enc, y), x) < 1e-12);
}

TEST_CASE("p_dc: single coil full sampling inverts the data") {
  const EncodingContext enc{uniform_coil(16, 20), make_mask(16, 20, 1.0, 0, 0)};
  const KSpaceData y = random_measurement(enc, 3);
  const ComplexImage expected = ifft2_unitary(ifftshift(y.coil_data[0]));
  CHECK(max_abs_diff(p_dc(oracle::random_complex(16, 20, 4), enc, y), expected) < 1e-12);
}

TEST_CASE("p_dc / p_dc_bias: idempotent when E is a partial isometry") {
  // Single coil with any mask, or RSS-normalized coils at full sampling.
  const EncodingContext cases[] = {{uniform_coil(32, 32), make_mask(32, 32, 4.0, 6, 5)},
                                   {simulate_coils(32, 32, 4), make_mask(32, 32, 1.0, 0, 0)}};
  for (const auto& enc : cases) {
    const KSpaceData y = random_measurement(enc, 6);
    const ComplexImage x = oracle::random_complex(32, 32, 7);
    const ComplexImage once = p_dc(x, enc, y);
    CHECK(max_abs_diff(p_dc(once, enc, y), once) < 1e-10);
    const RealImage b = oracle::random_real(32, 32, 8, 0.8, 1.2);
    const ComplexImage bonce = p_dc_bias(x, b, enc, y);
    CHECK(max_abs_diff(p_dc_bias(bonce, b, enc, y), bonce) < 1e-10);
  }
}

TEST_CASE("p_dc_bias: unit field, composition, gauge") {
  const EncodingContext enc{simulate_coils(24, 28, 2), make_mask(24, 28, 2.0, 4, 9)};
  const KSpaceData y = random_measurement(enc, 10);
  const ComplexImage x = oracle::random_complex(24, 28, 11);
  CHECK(max_abs_diff(p_dc_bias(x, RealImage(24, 28, 1.0), enc, y), p_dc(x, enc, y)) <= 1e-12);

  const RealImage b = oracle::random_real(24, 28, 12, 0.8, 1.2);
  const ComplexImage composed = divide(p_dc(multiply(x, b), enc, y), b);
  CHECK(max_abs_diff(p_dc_bias(x, b, enc, y), composed) < 1e-12);

  const double c = 1.7;
  RealImage cb = b;
  for (auto& v : cb.values()) v *= c;
  const ComplexImage xc = (1.0 / c) * x;
  CHECK(max_abs_diff(multiply(p_dc_bias(xc, cb, enc, y), cb), multiply(p_dc_bias(x, b, enc, y), b)) < 1e-12);
  CHECK(std::abs(dc_residual(xc, cb, enc, y) - dc_residual(x, b, enc, y)) < 1e-12 * norm2(y));

  const KSpaceData consistent = apply_E(multiply(x, b), enc.coils, enc.mask);
  CHECK(max_abs_diff(p_dc_bias(x, b, enc, consistent), x) < 1e-12);
}

TEST_CASE("p_phase examples") {
  const RealImage mag = oracle::random_real(20, 20, 13, 0.0, 1.0);
  const ComplexImage real_x = to_complex(mag);
  CHECK(max_abs_diff(p_phase(real_x, 3.0), real_x) < 1e-12);

  ComplexImage rotated(20, 20);
  for (std::size_t i = 0; i < mag.size(); ++i) rotated[i] = std::polar(mag[i], 0.9);
  CHECK(max_abs_diff(p_phase(rotated, 3.0), rotated) < 1e-10);

  const ComplexImage noisy = oracle::random_complex(20, 20, 14);
  const ComplexImage out = p_phase(noisy, 2.0);
  for (std::size_t i = 0; i < out.size(); ++i) CHECK(std::abs(out[i]) == doctest::Approx(std::abs(noisy[i])).epsilon(1e-15));

  ComplexImage with_zero = noisy;
  with_zero(4, 4) = 0.0;
  CHECK(p_phase(with_zero, 2.0)(4, 4) == cdouble(0.0, 0.0));
}

TEST_CASE("reconstruct: fully sampled noiseless data is recovered at the first DC step") {
  PhantomSpec spec;
  spec.height = spec.width = 64;
  spec.complex_phase = true;
  spec.seed = 15;
  const Phantom ph = make_phantom(spec);
  ReconInputs in;
  in.coils = simulate_coils(64, 64, 4);
  in.y = simulate_acquisition(ph.image, RealImage(64, 64, 1.0), in.coils, make_mask(64, 64, 1.0, 0, 0), {});
  in.support_mask = ph.brain_mask;
  SolverConfig cfg;
  cfg.mode = ReconMode::kBaseline;
  cfg.prior_steps = 0;
  cfg.num_iter = 11;
  const ReconResult r = reconstruct(in, cfg);
  CHECK(max_abs_diff(r.bx, ph.image) < 1e-10);
  for (double v : r.bias.field.values()) CHECK(v == 1.0);
  CHECK(r.diagnostics.residual_trace.size() == 11);
  CHECK(r.diagnostics.dc_steps.size() == 1);
}

TEST_CASE("reconstruct: joint mode with the true field frozen at R = 1") {
  PhantomSpec spec;
  spec.height = spec.width = 64;
  spec.seed = 16;
  const Phantom ph = make_phantom(spec);
  RealImage b(64, 64);
  for (int r = 0; r < 64; ++r)
    for (int c = 0; c < 64; ++c) b(r, c) = 1.0 + 0.15 * std::sin(r / 20.0) * std::cos(c / 25.0);
  ReconInputs in;
  in.coils = uniform_coil(64, 64);
  in.y = simulate_acquisition(ph.image, b, in.coils, make_mask(64, 64, 1.0, 0, 0), {});
  in.support_mask = ph.brain_mask;
  in.initial_bias = b;
  SolverConfig cfg;
  cfg.prior_steps = 0;
  cfg.num_iter = 21;
  cfg.freeze_bias = true;
  const ReconResult r = reconstruct(in, cfg);
  CHECK(masked_rmse_percent(r.bx, multiply(ph.image, b), ph.brain_mask) <= 1e-8);
  CHECK(max_abs_diff(r.x, ph.image) < 1e-10);
  CHECK(max_abs_diff(r.bx, multiply(r.x, r.bias.field)) <= 1e-12);
}

TEST_CASE("reconstruct: DC steps never increase the residual; bias updates on schedule") {
  PhantomSpec spec;
  spec.height = spec.width = 56;
  spec.seed = 17;
  const Phantom ph = make_phantom(spec);
  ReconInputs in;
  in.coils = uniform_coil(56, 56);
  in.y = simulate_acquisition(ph.image, RealImage(56, 56, 1.0), in.coils, make_mask(56, 56, 2.0, 8, 3),
                              {.sigma = 0.01, .seed = 4});
  in.support_mask = ph.brain_mask;
  const PatchVaeParams prior = PatchVaeParams::random_init({.patch_size = 28, .hidden = 16, .latent = 4}, 5);
  in.prior = &prior;
  SolverConfig cfg;
  cfg.num_iter = 42;
  cfg.prior_steps = 2;
  cfg.alpha = 1e-5;
  cfg.seed = 6;
  const ReconResult r = reconstruct(in, cfg);
  CHECK(r.diagnostics.iterations_run == 42);
  CHECK(r.diagnostics.dc_steps.size() == 4);
  CHECK(r.diagnostics.bias_updates == std::vector<int>{10, 20, 30, 40});
  for (const auto& s : r.diagnostics.dc_steps) CHECK(s.after <= s.before);
  CHECK(std::abs(masked_mean(r.bias.field, ph.brain_mask) - 1.0) < 0.05);
  // Same seed, same result.
  CHECK(reconstruct(in, cfg).bx == r.bx);
}

TEST_CASE("reconstruct: argument checks") {
  ReconInputs in;
  in.coils = uniform_coil(32, 32);
  in.y = apply_E(ComplexImage(32, 32, 1.0), in.coils, make_mask(32, 32, 1.0, 0, 0));
  in.support_mask = RealImage(32, 32, 1.0);
  SolverConfig cfg;
  CHECK_THROWS(reconstruct(in, cfg));  // prior missing
  cfg.prior_steps = 0;
  cfg.alpha = 0.0;
  CHECK_THROWS(reconstruct(in, cfg));
  CHECK(parse_mode("baseline") == ReconMode::kBaseline);
  CHECK_THROWS(parse_mode("both"));
}
