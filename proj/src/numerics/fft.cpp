#include "brc/numerics/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

namespace brc {
namespace {

// The FFTW planner is not thread-safe; execution with new arrays is.
// FFTW_UNALIGNED makes the chosen codelets independent of buffer alignment,
// which keeps repeated transforms of the same data bit-identical.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(int height, int width, int sign) {
    std::lock_guard lock(mutex_);
    const auto key = std::make_tuple(height, width, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    const std::size_t n = static_cast<std::size_t>(height) * static_cast<std::size_t>(width);
    auto* in = fftw_alloc_complex(n);
    auto* out = fftw_alloc_complex(n);
    fftw_plan plan = fftw_plan_dft_2d(height, width, in, out, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(in);
    fftw_free(out);
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

ComplexImage transform(const ComplexImage& img, int sign) {
  if (img.empty()) throw std::invalid_argument("fft2: empty image");
  if (!all_finite(img)) throw std::invalid_argument("fft2: non-finite input");
  ComplexImage in = img;
  ComplexImage out(img.height(), img.width());
  fftw_plan plan = plan_cache().get(img.height(), img.width(), sign);
  fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(in.values().data()),
                   reinterpret_cast<fftw_complex*>(out.values().data()));
  const double scale = 1.0 / std::sqrt(static_cast<double>(img.size()));
  for (auto& v : out.values()) v *= scale;
  return out;
}

}  // namespace

ComplexImage fft2_unitary(const ComplexImage& img) { return transform(img, FFTW_FORWARD); }

ComplexImage ifft2_unitary(const ComplexImage& img) { return transform(img, FFTW_BACKWARD); }

namespace {

ComplexImage circshift(const ComplexImage& img, int dr, int dc) {
  const int h = img.height();
  const int w = img.width();
  ComplexImage out(h, w);
  for (int r = 0; r < h; ++r) {
    const int rr = (r + dr) % h;
    for (int c = 0; c < w; ++c) out(rr, (c + dc) % w) = img(r, c);
  }
  return out;
}

}  // namespace

ComplexImage fftshift(const ComplexImage& img) { return circshift(img, img.height() / 2, img.width() / 2); }

ComplexImage ifftshift(const ComplexImage& img) {
  return circshift(img, img.height() - img.height() / 2, img.width() - img.width() / 2);
}

}  // namespace brc
