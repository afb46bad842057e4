#include "brc/numerics/image.hpp"

#include <algorithm>
#include <cmath>

namespace brc {

bool all_finite(const RealImage& img) {
  return std::all_of(img.values().begin(), img.values().end(), [](double v) { return std::isfinite(v); });
}

bool all_finite(const ComplexImage& img) {
  return std::all_of(img.values().begin(), img.values().end(),
                     [](cdouble v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); });
}

RealImage magnitude(const ComplexImage& img) {
  RealImage out(img.height(), img.width());
  for (std::size_t i = 0; i < img.size(); ++i) out[i] = std::abs(img[i]);
  return out;
}

ComplexImage to_complex(const RealImage& img) {
  ComplexImage out(img.height(), img.width());
  for (std::size_t i = 0; i < img.size(); ++i) out[i] = cdouble(img[i], 0.0);
  return out;
}

ComplexImage multiply(const ComplexImage& img, const RealImage& field) {
  require_same_shape(img, field, "multiply");
  ComplexImage out(img.height(), img.width());
  for (std::size_t i = 0; i < img.size(); ++i) out[i] = img[i] * field[i];
  return out;
}

ComplexImage divide(const ComplexImage& img, const RealImage& field) {
  require_same_shape(img, field, "divide");
  ComplexImage out(img.height(), img.width());
  for (std::size_t i = 0; i < img.size(); ++i) out[i] = img[i] / field[i];
  return out;
}

cdouble inner(const ComplexImage& a, const ComplexImage& b) {
  require_same_shape(a, b, "inner");
  cdouble acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

double norm2(const ComplexImage& img) {
  double acc = 0.0;
  for (const auto& v : img.values()) acc += std::norm(v);
  return std::sqrt(acc);
}

double norm2(const RealImage& img) {
  double acc = 0.0;
  for (double v : img.values()) acc += v * v;
  return std::sqrt(acc);
}

ComplexImage operator+(const ComplexImage& a, const ComplexImage& b) {
  require_same_shape(a, b, "operator+");
  ComplexImage out(a.height(), a.width());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

ComplexImage operator-(const ComplexImage& a, const ComplexImage& b) {
  require_same_shape(a, b, "operator-");
  ComplexImage out(a.height(), a.width());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

ComplexImage operator*(cdouble s, const ComplexImage& a) {
  ComplexImage out(a.height(), a.width());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = s * a[i];
  return out;
}

double max_abs_diff(const ComplexImage& a, const ComplexImage& b) {
  require_same_shape(a, b, "max_abs_diff");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double max_abs_diff(const RealImage& a, const RealImage& b) {
  require_same_shape(a, b, "max_abs_diff");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double masked_mean(const RealImage& img, const RealImage& mask) {
  require_same_shape(img, mask, "masked_mean");
  double acc = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < img.size(); ++i) {
    if (mask[i] > 0.5) {
      acc += img[i];
      ++n;
    }
  }
  if (n == 0) throw std::invalid_argument("masked_mean: empty mask");
  return acc / static_cast<double>(n);
}

std::size_t mask_count(const RealImage& mask) {
  return static_cast<std::size_t>(
      std::count_if(mask.values().begin(), mask.values().end(), [](double v) { return v > 0.5; }));
}

}  // namespace brc
