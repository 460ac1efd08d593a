#include "helitack/simd/kernels.hpp"

#include <algorithm>
#include <limits>

namespace helitack::simd {
namespace {

// Same operand semantics as maxps/minps so both variants agree on ties.
inline float vmax(float a, float b) { return a > b ? a : b; }
inline double vmin(double a, double b) { return a < b ? a : b; }

void map_codes(const std::uint8_t* codes, std::size_t n, const std::array<float, 4>& lut,
               float* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = lut[codes[i] & 3u];
}

void max_pool2x(const float* in, int width, int height, float* out) {
  const int ow = (width + 1) / 2;
  const int oh = (height + 1) / 2;
  for (int r = 0; r < oh; ++r) {
    const float* a = in + static_cast<std::size_t>(2 * r) * width;
    const float* b = (2 * r + 1 < height) ? a + width : a;
    for (int c = 0; c < ow; ++c) {
      const int c0 = 2 * c;
      const int c1 = std::min(c0 + 1, width - 1);
      out[static_cast<std::size_t>(r) * ow + c] =
          vmax(vmax(a[c0], b[c0]), vmax(a[c1], b[c1]));
    }
  }
}

std::size_t count_equal_u8(const std::uint8_t* data, std::size_t n, std::uint8_t value) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) count += data[i] == value;
  return count;
}

std::size_t collect_equal_f32(const float* data, std::size_t n, float value, std::uint32_t* out) {
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (data[i] == value) out[k++] = static_cast<std::uint32_t>(i);
  }
  return k;
}

double min_dist2(const double* xs, const double* ys, const double* zs, std::size_t n, double qx,
                 double qy, double qz) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = xs[i] - qx;
    const double dy = ys[i] - qy;
    const double dz = zs[i] - qz;
    const double d2 = dx * dx + dy * dy + dz * dz;
    best = vmin(d2, best);
  }
  return best;
}

} // namespace

namespace detail {
const KernelTable kScalarTable{Isa::Scalar, map_codes, max_pool2x, count_equal_u8,
                               collect_equal_f32, min_dist2};
} // namespace detail

} // namespace helitack::simd
