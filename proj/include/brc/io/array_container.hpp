#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "brc/numerics/image.hpp"

namespace brc {

/// "BRC1" container: magic, dtype (u8), ndim (u8), dims (u32 LE each),
/// row-major little-endian IEEE-754 payload.
enum class DType : std::uint8_t { kF64 = 0, kC128 = 1 };

struct NdArray {
  DType dtype = DType::kF64;
  std::vector<std::uint32_t> dims;
  std::vector<double> real;      // used when dtype == kF64
  std::vector<cdouble> complex;  // used when dtype == kC128

  std::size_t element_count() const;
  bool operator==(const NdArray&) const = default;
};

std::string encode_array(const NdArray& array);
NdArray decode_array(const std::string& bytes);

void write_array(const std::filesystem::path& path, const NdArray& array);
NdArray read_array(const std::filesystem::path& path);

void write_real_image(const std::filesystem::path& path, const RealImage& img);
RealImage read_real_image(const std::filesystem::path& path);
void write_complex_image(const std::filesystem::path& path, const ComplexImage& img);
ComplexImage read_complex_image(const std::filesystem::path& path);
/// Stack of equally sized complex images as a 3D array (n, height, width).
void write_complex_stack(const std::filesystem::path& path, const std::vector<ComplexImage>& images);
std::vector<ComplexImage> read_complex_stack(const std::filesystem::path& path);
void write_vector(const std::filesystem::path& path, const std::vector<double>& values);
std::vector<double> read_vector(const std::filesystem::path& path);

std::string read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, const std::string& bytes);

}  // namespace brc
