#include "brc/solver/projections.hpp"

#include <cmath>

#include "brc/bias/bias_field.hpp"
#include "brc/numerics/filter.hpp"

namespace brc {

ComplexImage p_dc(const ComplexImage& x, const EncodingContext& enc, const KSpaceData& y) {
  const KSpaceData r = subtract(apply_E(x, enc.coils, enc.mask), y);
  return x - apply_EH(r, enc.coils);
}

ComplexImage p_dc_bias(const ComplexImage& x, const RealImage& bias, const EncodingContext& enc,
                       const KSpaceData& y) {
  const RealImage b = clamped_field(bias);
  return divide(p_dc(multiply(x, b), enc, y), b);
}

ComplexImage p_phase(const ComplexImage& x, double smoothing_sigma) {
  if (!(smoothing_sigma >= 0.0)) throw std::invalid_argument("p_phase: sigma must be >= 0");
  RealImage re(x.height(), x.width(), 0.0);
  RealImage im(x.height(), x.width(), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double m = std::abs(x[i]);
    if (m > 0.0) {
      re[i] = x[i].real() / m;
      im[i] = x[i].imag() / m;
    }
  }
  const RealImage re_s = lowpass_gaussian(re, smoothing_sigma);
  const RealImage im_s = lowpass_gaussian(im, smoothing_sigma);
  ComplexImage out(x.height(), x.width());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double m = std::abs(x[i]);
    const double phase = (m > 0.0 && (re_s[i] != 0.0 || im_s[i] != 0.0)) ? std::atan2(im_s[i], re_s[i]) : 0.0;
    out[i] = std::polar(m, phase);
  }
  return out;
}

double dc_residual(const ComplexImage& x, const RealImage& bias, const EncodingContext& enc, const KSpaceData& y) {
  return norm2(subtract(apply_E(multiply(x, bias), enc.coils, enc.mask), y));
}

}  // namespace brc
