#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace brc {

using cdouble = std::complex<double>;

/// Row-major 2D array. Complex images store interleaved (re, im) pairs
/// because std::complex<double> is layout-compatible with double[2].
template <typename T>
class Image2D {
 public:
  Image2D() = default;
  Image2D(int height, int width, T fill = T{}) : height_(height), width_(width) {
    if (height < 1 || width < 1) {
      throw std::invalid_argument("image dimensions must be >= 1, got " + std::to_string(height) + "x" +
                                  std::to_string(width));
    }
    data_.assign(static_cast<std::size_t>(height) * static_cast<std::size_t>(width), fill);
  }

  int height() const { return height_; }
  int width() const { return width_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T& operator()(int row, int col) { return data_[index(row, col)]; }
  const T& operator()(int row, int col) const { return data_[index(row, col)]; }
  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

  std::span<T> data() { return data_; }
  std::span<const T> data() const { return data_; }
  std::vector<T>& values() { return data_; }
  const std::vector<T>& values() const { return data_; }

  bool same_shape(const Image2D& other) const { return height_ == other.height_ && width_ == other.width_; }
  template <typename U>
  bool same_shape(const Image2D<U>& other) const {
    return height_ == other.height() && width_ == other.width();
  }

  bool operator==(const Image2D&) const = default;

 private:
  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(col);
  }

  int height_ = 0;
  int width_ = 0;
  std::vector<T> data_;
};

using RealImage = Image2D<double>;
using ComplexImage = Image2D<cdouble>;

template <typename A, typename B>
void require_same_shape(const Image2D<A>& a, const Image2D<B>& b, const char* what) {
  if (a.height() != b.height() || a.width() != b.width()) {
    throw std::invalid_argument(std::string(what) + ": shape mismatch (" + std::to_string(a.height()) + "x" +
                                std::to_string(a.width()) + " vs " + std::to_string(b.height()) + "x" +
                                std::to_string(b.width()) + ")");
  }
}

bool all_finite(const RealImage& img);
bool all_finite(const ComplexImage& img);

RealImage magnitude(const ComplexImage& img);
ComplexImage to_complex(const RealImage& img);
/// Pixelwise product with a real field.
ComplexImage multiply(const ComplexImage& img, const RealImage& field);
/// Pixelwise quotient by a real field (no clamping; callers clamp).
ComplexImage divide(const ComplexImage& img, const RealImage& field);

/// Hermitian inner product sum(conj(a) * b).
cdouble inner(const ComplexImage& a, const ComplexImage& b);
double norm2(const ComplexImage& img);
double norm2(const RealImage& img);

ComplexImage operator+(const ComplexImage& a, const ComplexImage& b);
ComplexImage operator-(const ComplexImage& a, const ComplexImage& b);
ComplexImage operator*(cdouble s, const ComplexImage& a);

double max_abs_diff(const ComplexImage& a, const ComplexImage& b);
double max_abs_diff(const RealImage& a, const RealImage& b);

/// Mean of img over pixels where mask > 0.5.
double masked_mean(const RealImage& img, const RealImage& mask);
std::size_t mask_count(const RealImage& mask);

}  // namespace brc
