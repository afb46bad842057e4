#include "brc/io/array_container.hpp"

#include <bit>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace brc {
namespace {

constexpr char kMagic[4] = {'B', 'R', 'C', '1'};

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
}

void put_f64(std::string& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xffu));
}

class Reader {
 public:
  explicit Reader(const std::string& bytes) : bytes_(bytes) {}

  std::uint8_t u8() {
    need(1);
    return static_cast<std::uint8_t>(bytes_[pos_++]);
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<std::uint8_t>(bytes_[pos_++])) << (8 * i);
    return v;
  }
  double f64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<std::uint8_t>(bytes_[pos_++])) << (8 * i);
    return std::bit_cast<double>(v);
  }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > bytes_.size()) throw std::runtime_error("array container: truncated data");
  }
  const std::string& bytes_;
  std::size_t pos_ = 0;
};

std::uint32_t checked_dim(int v) {
  if (v < 0) throw std::invalid_argument("array container: negative dimension");
  return static_cast<std::uint32_t>(v);
}

}  // namespace

std::size_t NdArray::element_count() const {
  std::size_t n = 1;
  for (auto d : dims) n *= d;
  return n;
}

std::string encode_array(const NdArray& a) {
  if (a.dims.empty() || a.dims.size() > 255) throw std::invalid_argument("array container: ndim must be in [1, 255]");
  const std::size_t n = a.element_count();
  if ((a.dtype == DType::kF64 && a.real.size() != n) || (a.dtype == DType::kC128 && a.complex.size() != n)) {
    throw std::invalid_argument("array container: payload size does not match dims");
  }
  std::string out(kMagic, 4);
  out.push_back(static_cast<char>(a.dtype));
  out.push_back(static_cast<char>(a.dims.size()));
  for (auto d : a.dims) put_u32(out, d);
  if (a.dtype == DType::kF64) {
    for (double v : a.real) put_f64(out, v);
  } else {
    for (const auto& v : a.complex) {
      put_f64(out, v.real());
      put_f64(out, v.imag());
    }
  }
  return out;
}

NdArray decode_array(const std::string& bytes) {
  if (bytes.size() < 6 || bytes.compare(0, 4, kMagic, 4) != 0) throw std::runtime_error("array container: bad magic");
  Reader in(bytes);
  for (int i = 0; i < 4; ++i) in.u8();
  NdArray a;
  const auto code = in.u8();
  if (code > 1) throw std::runtime_error("array container: unknown dtype code " + std::to_string(code));
  a.dtype = static_cast<DType>(code);
  const auto ndim = in.u8();
  if (ndim == 0) throw std::runtime_error("array container: ndim is zero");
  for (int i = 0; i < ndim; ++i) a.dims.push_back(in.u32());
  const std::size_t n = a.element_count();
  const std::size_t elem = a.dtype == DType::kF64 ? 8 : 16;
  const std::size_t header = 6 + 4 * static_cast<std::size_t>(ndim);
  if (bytes.size() != header + n * elem) throw std::runtime_error("array container: payload length mismatch");
  if (a.dtype == DType::kF64) {
    a.real.resize(n);
    for (auto& v : a.real) v = in.f64();
  } else {
    a.complex.resize(n);
    for (auto& v : a.complex) {
      const double re = in.f64();
      const double im = in.f64();
      v = cdouble(re, im);
    }
  }
  return a;
}

std::string read_file_bytes(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_file_bytes(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw std::runtime_error("write failed for " + path.string());
}

void write_array(const std::filesystem::path& path, const NdArray& array) {
  write_file_bytes(path, encode_array(array));
}

NdArray read_array(const std::filesystem::path& path) { return decode_array(read_file_bytes(path)); }

void write_real_image(const std::filesystem::path& path, const RealImage& img) {
  write_array(path, NdArray{DType::kF64, {checked_dim(img.height()), checked_dim(img.width())}, img.values(), {}});
}

RealImage read_real_image(const std::filesystem::path& path) {
  const NdArray a = read_array(path);
  if (a.dtype != DType::kF64 || a.dims.size() != 2) throw std::runtime_error(path.string() + ": expected 2D f64 array");
  RealImage img(static_cast<int>(a.dims[0]), static_cast<int>(a.dims[1]));
  img.values() = a.real;
  return img;
}

void write_complex_image(const std::filesystem::path& path, const ComplexImage& img) {
  write_array(path, NdArray{DType::kC128, {checked_dim(img.height()), checked_dim(img.width())}, {}, img.values()});
}

ComplexImage read_complex_image(const std::filesystem::path& path) {
  const NdArray a = read_array(path);
  if (a.dtype != DType::kC128 || a.dims.size() != 2) {
    throw std::runtime_error(path.string() + ": expected 2D c128 array");
  }
  ComplexImage img(static_cast<int>(a.dims[0]), static_cast<int>(a.dims[1]));
  img.values() = a.complex;
  return img;
}

void write_complex_stack(const std::filesystem::path& path, const std::vector<ComplexImage>& images) {
  if (images.empty()) throw std::invalid_argument("write_complex_stack: no images");
  NdArray a;
  a.dtype = DType::kC128;
  a.dims = {checked_dim(static_cast<int>(images.size())), checked_dim(images.front().height()),
            checked_dim(images.front().width())};
  for (const auto& img : images) {
    require_same_shape(img, images.front(), "write_complex_stack");
    a.complex.insert(a.complex.end(), img.values().begin(), img.values().end());
  }
  write_array(path, a);
}

std::vector<ComplexImage> read_complex_stack(const std::filesystem::path& path) {
  const NdArray a = read_array(path);
  if (a.dtype != DType::kC128 || a.dims.size() != 3) {
    throw std::runtime_error(path.string() + ": expected 3D c128 array");
  }
  std::vector<ComplexImage> out;
  const std::size_t plane = static_cast<std::size_t>(a.dims[1]) * a.dims[2];
  for (std::uint32_t k = 0; k < a.dims[0]; ++k) {
    ComplexImage img(static_cast<int>(a.dims[1]), static_cast<int>(a.dims[2]));
    std::copy(a.complex.begin() + k * plane, a.complex.begin() + (k + 1) * plane, img.values().begin());
    out.push_back(std::move(img));
  }
  return out;
}

void write_vector(const std::filesystem::path& path, const std::vector<double>& values) {
  write_array(path, NdArray{DType::kF64, {static_cast<std::uint32_t>(values.size())}, values, {}});
}

std::vector<double> read_vector(const std::filesystem::path& path) {
  const NdArray a = read_array(path);
  if (a.dtype != DType::kF64 || a.dims.size() != 1) throw std::runtime_error(path.string() + ": expected 1D f64 array");
  return a.real;
}

}  // namespace brc
