#include "brc/sim/phantom.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

#include "brc/numerics/filter.hpp"
#include "brc/numerics/rng.hpp"

namespace brc {
namespace {

constexpr double kPi = std::numbers::pi;

struct Harmonic {
  int order;
  double amplitude;
  double phase;
};

/// Ellipse with a radially modulated boundary.
struct WavyEllipse {
  double cy, cx, ay, ax, angle;
  std::vector<Harmonic> harmonics;

  bool contains(double v, double u) const {
    const double dy = v - cy;
    const double dx = u - cx;
    const double ca = std::cos(angle);
    const double sa = std::sin(angle);
    const double ry = (dy * ca - dx * sa) / ay;
    const double rx = (dy * sa + dx * ca) / ax;
    const double theta = std::atan2(ry, rx);
    double radius = 1.0;
    for (const auto& h : harmonics) radius += h.amplitude * std::cos(h.order * theta + h.phase);
    return ry * ry + rx * rx <= radius * radius;
  }
};

std::vector<Harmonic> random_harmonics(Rng& rng, int lo, int hi, double amp_lo, double amp_hi) {
  std::vector<Harmonic> hs;
  for (int k = lo; k <= hi; ++k) hs.push_back({k, rng.uniform(amp_lo, amp_hi), rng.uniform(0.0, 2.0 * kPi)});
  return hs;
}

RealImage smooth_noise(Rng& rng, int h, int w, double sigma) {
  RealImage n(h, w);
  for (auto& v : n.values()) v = rng.normal();
  RealImage s = lowpass_gaussian(n, sigma);
  double sq = 0.0;
  for (double v : s.values()) sq += v * v;
  const double sd = std::sqrt(sq / s.size());
  for (auto& v : s.values()) v /= sd;
  return s;
}

}  // namespace

void validate(const PhantomSpec& spec) {
  if (spec.height < 16 || spec.width < 16) throw std::invalid_argument("phantom: dimensions must be >= 16");
  if (spec.n_tissues < 1) throw std::invalid_argument("phantom: n_tissues must be >= 1");
  if (static_cast<int>(spec.tissue_levels.size()) != spec.n_tissues) {
    throw std::invalid_argument("phantom: need exactly one level per tissue");
  }
  std::set<double> distinct;
  for (double l : spec.tissue_levels) {
    if (!(l >= 0.0 && l <= 1.0)) throw std::invalid_argument("phantom: tissue levels must lie in [0, 1]");
    distinct.insert(l);
  }
  if (static_cast<int>(distinct.size()) != spec.n_tissues) {
    throw std::invalid_argument("phantom: tissue levels must be distinct");
  }
  if (!(spec.texture_amplitude >= 0.0 && spec.texture_amplitude < 0.5)) {
    throw std::invalid_argument("phantom: texture_amplitude must be in [0, 0.5)");
  }
  if (!(spec.edge_blur >= 0.0 && spec.edge_blur <= 8.0)) {
    throw std::invalid_argument("phantom: edge_blur must be in [0, 8] pixels");
  }
}

Phantom make_phantom(const PhantomSpec& spec) {
  validate(spec);
  Rng rng(derive_seed(spec.seed, 0x5048414eULL));
  const int h = spec.height;
  const int w = spec.width;

  const WavyEllipse brain{rng.uniform(-0.03, 0.03), rng.uniform(-0.03, 0.03), rng.uniform(0.74, 0.86),
                          rng.uniform(0.60, 0.72), rng.uniform(-0.15, 0.15), random_harmonics(rng, 2, 4, 0.0, 0.03)};
  const double inner_scale = rng.uniform(0.62, 0.74);
  const WavyEllipse inner{brain.cy + rng.uniform(-0.03, 0.03), brain.cx + rng.uniform(-0.03, 0.03),
                          brain.ay * inner_scale, brain.ax * inner_scale, brain.angle + rng.uniform(-0.1, 0.1),
                          random_harmonics(rng, 5, 9, 0.02, 0.06)};
  std::vector<WavyEllipse> ventricles;
  {
    const double gap = rng.uniform(0.06, 0.12);
    const double vy = brain.cy + rng.uniform(-0.08, 0.04);
    const double ay = rng.uniform(0.14, 0.24);
    const double ax = rng.uniform(0.04, 0.08);
    for (double side : {-1.0, 1.0}) {
      ventricles.push_back({vy, brain.cx + side * gap, ay, ax, side * rng.uniform(0.1, 0.35),
                            random_harmonics(rng, 2, 3, 0.0, 0.08)});
    }
  }
  std::vector<std::vector<WavyEllipse>> blobs;
  for (int t = 3; t < spec.n_tissues; ++t) {
    std::vector<WavyEllipse> group;
    const int count = 2 + static_cast<int>(rng.below(3));
    for (int k = 0; k < count; ++k) {
      const double ang = rng.uniform(0.0, 2.0 * kPi);
      const double rad = rng.uniform(0.2, 0.45);
      const double size = rng.uniform(0.04, 0.09);
      group.push_back({brain.cy + rad * inner.ay * std::sin(ang), brain.cx + rad * inner.ax * std::cos(ang), size,
                       size * rng.uniform(0.7, 1.3), rng.uniform(0.0, kPi), random_harmonics(rng, 2, 3, 0.0, 0.1)});
    }
    blobs.push_back(std::move(group));
  }

  Phantom out{ComplexImage(h, w), RealImage(h, w, 0.0), RealImage(h, w, -1.0)};
  for (int r = 0; r < h; ++r) {
    const double v = 2.0 * (r + 0.5) / h - 1.0;
    for (int c = 0; c < w; ++c) {
      const double u = 2.0 * (c + 0.5) / w - 1.0;
      if (!brain.contains(v, u)) continue;
      int label = 0;
      if (spec.n_tissues >= 2 && inner.contains(v, u)) label = 1;
      if (spec.n_tissues >= 3) {
        for (const auto& e : ventricles)
          if (e.contains(v, u)) label = 2;
      }
      for (std::size_t g = 0; g < blobs.size(); ++g) {
        for (const auto& e : blobs[g])
          if (label == 1 && e.contains(v, u)) label = static_cast<int>(g) + 3;
      }
      out.brain_mask(r, c) = 1.0;
      out.labels(r, c) = label;
    }
  }
  if (mask_count(out.brain_mask) == 0) throw std::invalid_argument("phantom: degenerate geometry (empty brain)");

  std::vector<RealImage> textures;
  if (spec.texture_amplitude > 0.0) {
    for (int t = 0; t < spec.n_tissues; ++t) textures.push_back(smooth_noise(rng, h, w, 2.0));
  }
  // Polynomial phase, scaled so that |phase| <= pi/4 on the grid.
  std::array<double, 5> pc{};
  if (spec.complex_phase) {
    for (auto& a : pc) a = rng.uniform(-1.0, 1.0);
  }
  double phase_max = 0.0;
  RealImage phase(h, w, 0.0);
  if (spec.complex_phase) {
    for (int r = 0; r < h; ++r) {
      const double v = 2.0 * (r + 0.5) / h - 1.0;
      for (int c = 0; c < w; ++c) {
        const double u = 2.0 * (c + 0.5) / w - 1.0;
        phase(r, c) = pc[0] * u + pc[1] * v + pc[2] * u * v + pc[3] * u * u + pc[4] * v * v;
        phase_max = std::max(phase_max, std::abs(phase(r, c)));
      }
    }
  }
  const double phase_scale = phase_max > 0.0 ? (kPi / 4.0) / phase_max : 0.0;

  RealImage mag(h, w, 0.0);
  for (std::size_t i = 0; i < mag.size(); ++i) {
    const int label = static_cast<int>(out.labels[i]);
    if (label < 0) continue;
    double value = spec.tissue_levels[label];
    if (!textures.empty()) value *= 1.0 + spec.texture_amplitude * textures[label][i];
    mag[i] = std::clamp(value, 0.0, 1.0);
  }
  if (spec.edge_blur > 0.0) {
    // Normalized convolution inside the brain: tissue boundaries soften,
    // the brain boundary stays sharp.
    const RealImage num = lowpass_gaussian(mag, spec.edge_blur);
    const RealImage den = lowpass_gaussian(out.brain_mask, spec.edge_blur);
    for (std::size_t i = 0; i < mag.size(); ++i) mag[i] = out.brain_mask[i] > 0.5 ? num[i] / den[i] : 0.0;
  }
  for (std::size_t i = 0; i < out.image.size(); ++i) out.image[i] = std::polar(mag[i], phase[i] * phase_scale);
  return out;
}

}  // namespace brc
