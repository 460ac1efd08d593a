// Compiled with -mavx2; only reached when CPUID reports AVX2.

#include "helitack/simd/kernels.hpp"

#include <immintrin.h>

#include <limits>

namespace helitack::simd {
namespace {

inline float vmax(float a, float b) { return a > b ? a : b; }
inline double vmin(double a, double b) { return a < b ? a : b; }

void map_codes(const std::uint8_t* codes, std::size_t n, const std::array<float, 4>& lut,
               float* out) {
  const __m256 table = _mm256_setr_ps(lut[0], lut[1], lut[2], lut[3], lut[0], lut[1], lut[2], lut[3]);
  const __m256i mask = _mm256_set1_epi32(3);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m128i bytes = _mm_loadl_epi64(reinterpret_cast<const __m128i*>(codes + i));
    const __m256i idx = _mm256_and_si256(_mm256_cvtepu8_epi32(bytes), mask);
    _mm256_storeu_ps(out + i, _mm256_permutevar8x32_ps(table, idx));
  }
  for (; i < n; ++i) out[i] = lut[codes[i] & 3u];
}

void max_pool2x(const float* in, int width, int height, float* out) {
  const int ow = (width + 1) / 2;
  const int oh = (height + 1) / 2;
  for (int r = 0; r < oh; ++r) {
    const float* a = in + static_cast<std::size_t>(2 * r) * width;
    const float* b = (2 * r + 1 < height) ? a + width : a;
    float* dst = out + static_cast<std::size_t>(r) * ow;
    int c = 0;
    // 16 input columns -> 8 outputs per iteration; needs c0 + 15 < width.
    for (; 2 * c + 16 <= width; c += 8) {
      const int c0 = 2 * c;
      const __m256 v0 = _mm256_max_ps(_mm256_loadu_ps(a + c0), _mm256_loadu_ps(b + c0));
      const __m256 v1 = _mm256_max_ps(_mm256_loadu_ps(a + c0 + 8), _mm256_loadu_ps(b + c0 + 8));
      const __m256 even = _mm256_shuffle_ps(v0, v1, _MM_SHUFFLE(2, 0, 2, 0));
      const __m256 odd = _mm256_shuffle_ps(v0, v1, _MM_SHUFFLE(3, 1, 3, 1));
      const __m256 pairs = _mm256_max_ps(even, odd);
      const __m256d ordered =
          _mm256_permute4x64_pd(_mm256_castps_pd(pairs), _MM_SHUFFLE(3, 1, 2, 0));
      _mm256_storeu_ps(dst + c, _mm256_castpd_ps(ordered));
    }
    for (; c < ow; ++c) {
      const int c0 = 2 * c;
      const int c1 = c0 + 1 < width ? c0 + 1 : width - 1;
      dst[c] = vmax(vmax(a[c0], b[c0]), vmax(a[c1], b[c1]));
    }
  }
}

std::size_t count_equal_u8(const std::uint8_t* data, std::size_t n, std::uint8_t value) {
  const __m256i needle = _mm256_set1_epi8(static_cast<char>(value));
  std::size_t count = 0;
  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) {
    const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(data + i));
    const auto bits = static_cast<unsigned>(_mm256_movemask_epi8(_mm256_cmpeq_epi8(v, needle)));
    count += static_cast<std::size_t>(__builtin_popcount(bits));
  }
  for (; i < n; ++i) count += data[i] == value;
  return count;
}

std::size_t collect_equal_f32(const float* data, std::size_t n, float value, std::uint32_t* out) {
  const __m256 needle = _mm256_set1_ps(value);
  std::size_t k = 0;
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    auto bits = static_cast<unsigned>(
        _mm256_movemask_ps(_mm256_cmp_ps(_mm256_loadu_ps(data + i), needle, _CMP_EQ_OQ)));
    while (bits) {
      out[k++] = static_cast<std::uint32_t>(i + static_cast<std::size_t>(__builtin_ctz(bits)));
      bits &= bits - 1;
    }
  }
  for (; i < n; ++i) {
    if (data[i] == value) out[k++] = static_cast<std::uint32_t>(i);
  }
  return k;
}

double min_dist2(const double* xs, const double* ys, const double* zs, std::size_t n, double qx,
                 double qy, double qz) {
  const __m256d vx = _mm256_set1_pd(qx);
  const __m256d vy = _mm256_set1_pd(qy);
  const __m256d vz = _mm256_set1_pd(qz);
  __m256d best = _mm256_set1_pd(std::numeric_limits<double>::infinity());
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(xs + i), vx);
    const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(ys + i), vy);
    const __m256d dz = _mm256_sub_pd(_mm256_loadu_pd(zs + i), vz);
    const __m256d d2 = _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy)),
                                     _mm256_mul_pd(dz, dz));
    best = _mm256_min_pd(d2, best);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, best);
  double result = vmin(vmin(lanes[0], lanes[1]), vmin(lanes[2], lanes[3]));
  for (; i < n; ++i) {
    const double dx = xs[i] - qx;
    const double dy = ys[i] - qy;
    const double dz = zs[i] - qz;
    result = vmin(dx * dx + dy * dy + dz * dz, result);
  }
  return result;
}

} // namespace

namespace detail {
const KernelTable kAvx2Table{Isa::Avx2, map_codes, max_pool2x, count_equal_u8, collect_equal_f32,
                             min_dist2};
} // namespace detail

} // namespace helitack::simd
