#include "brc/encoding/encoding.hpp"

#include <cmath>
#include <stdexcept>

#include "brc/numerics/fft.hpp"

namespace brc {
namespace {

void check_mask(const SamplingMask& mask, int height, int width) {
  if (mask.height != height || mask.width != width) throw std::invalid_argument("encoding: mask shape mismatch");
}

}  // namespace

void apply_mask(ComplexImage& kspace, const SamplingMask& mask) {
  check_mask(mask, kspace.height(), kspace.width());
  const auto flags = mask.row_flags();
  for (int r = 0; r < kspace.height(); ++r) {
    if (flags[r]) continue;
    for (int c = 0; c < kspace.width(); ++c) kspace(r, c) = 0.0;
  }
}

KSpaceData apply_E(const ComplexImage& x, const CoilSensitivities& coils, const SamplingMask& mask) {
  if (coils.maps.empty()) throw std::invalid_argument("apply_E: no coils");
  check_mask(mask, x.height(), x.width());
  KSpaceData y;
  y.mask = mask;
  y.coil_data.reserve(coils.maps.size());
  ComplexImage weighted(x.height(), x.width());
  for (const auto& map : coils.maps) {
    require_same_shape(map, x, "apply_E");
    for (std::size_t i = 0; i < x.size(); ++i) weighted[i] = map[i] * x[i];
    ComplexImage k = fftshift(fft2_unitary(weighted));
    apply_mask(k, mask);
    y.coil_data.push_back(std::move(k));
  }
  return y;
}

ComplexImage apply_EH(const KSpaceData& y, const CoilSensitivities& coils) {
  if (coils.maps.empty()) throw std::invalid_argument("apply_EH: no coils");
  if (y.coil_data.size() != coils.maps.size()) throw std::invalid_argument("apply_EH: coil count mismatch");
  ComplexImage x(coils.height(), coils.width(), 0.0);
  for (std::size_t c = 0; c < coils.maps.size(); ++c) {
    require_same_shape(y.coil_data[c], x, "apply_EH");
    require_same_shape(coils.maps[c], x, "apply_EH");
    ComplexImage k = y.coil_data[c];
    apply_mask(k, y.mask);
    const ComplexImage img = ifft2_unitary(ifftshift(k));
    const auto& map = coils.maps[c];
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += std::conj(map[i]) * img[i];
  }
  return x;
}

KSpaceData subtract(const KSpaceData& a, const KSpaceData& b) {
  if (a.coil_data.size() != b.coil_data.size()) throw std::invalid_argument("subtract: coil count mismatch");
  KSpaceData out;
  out.mask = a.mask;
  for (std::size_t c = 0; c < a.coil_data.size(); ++c) out.coil_data.push_back(a.coil_data[c] - b.coil_data[c]);
  return out;
}

cdouble inner(const KSpaceData& a, const KSpaceData& b) {
  if (a.coil_data.size() != b.coil_data.size()) throw std::invalid_argument("inner: coil count mismatch");
  cdouble acc = 0.0;
  for (std::size_t c = 0; c < a.coil_data.size(); ++c) acc += inner(a.coil_data[c], b.coil_data[c]);
  return acc;
}

double norm2(const KSpaceData& y) {
  double acc = 0.0;
  for (const auto& k : y.coil_data) {
    const double n = norm2(k);
    acc += n * n;
  }
  return std::sqrt(acc);
}

}  // namespace brc
