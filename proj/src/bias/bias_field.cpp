#include "brc/bias/bias_field.hpp"

#include <algorithm>
#include <stdexcept>

namespace brc {

double field_gauge(const BiasField& bias) { return masked_mean(bias.field, bias.support_mask); }

BiasField normalize_field(const BiasField& bias) {
  for (double v : bias.field.values()) {
    if (!(v > 0.0)) throw std::invalid_argument("normalize_field: field must be strictly positive");
  }
  const double mean = field_gauge(bias);
  BiasField out = bias;
  for (auto& v : out.field.values()) v /= mean;
  return out;
}

RealImage clamped_field(const RealImage& field) {
  RealImage out = field;
  for (auto& v : out.values()) v = std::max(v, kMinInvertibleBias);
  return out;
}

BiasField unit_field(int height, int width) {
  return BiasField{RealImage(height, width, 1.0), RealImage(height, width, 1.0)};
}

BiasField unit_field(const RealImage& support_mask) {
  return BiasField{RealImage(support_mask.height(), support_mask.width(), 1.0), support_mask};
}

}  // namespace brc
