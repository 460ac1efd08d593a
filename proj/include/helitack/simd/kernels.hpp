#pragma once

// Data-parallel inner loops used by observation assembly, agents and the
// dataset samplers. Each kernel has a scalar reference implementation and
// an AVX2 variant; the variant is picked once at startup from CPUID and can
// be forced to scalar with HELITACK_SIMD=scalar. Both variants are required
// to return bit-identical results (see tests/unit/test_simd.cpp).

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>

namespace helitack::simd {

enum class Isa { Scalar, Avx2 };

struct KernelTable {
  Isa isa;

  // out[i] = lut[codes[i] & 3]
  void (*map_codes)(const std::uint8_t* codes, std::size_t n, const std::array<float, 4>& lut,
                    float* out);

  // 2x2 max pooling; out is ceil(width/2) x ceil(height/2), row-major.
  void (*max_pool2x)(const float* in, int width, int height, float* out);

  std::size_t (*count_equal_u8)(const std::uint8_t* data, std::size_t n, std::uint8_t value);

  // Writes ascending indices i with data[i] == value; returns how many.
  std::size_t (*collect_equal_f32)(const float* data, std::size_t n, float value,
                                   std::uint32_t* out);

  // min_i |p_i - q|^2 over structure-of-arrays points; +inf when n == 0.
  double (*min_dist2)(const double* xs, const double* ys, const double* zs, std::size_t n,
                      double qx, double qy, double qz);
};

bool isa_supported(Isa isa);
std::string_view to_string(Isa isa);

// Table for a specific ISA; throws std::runtime_error when unsupported.
const KernelTable& kernels(Isa isa);

// Best supported table, honouring HELITACK_SIMD.
const KernelTable& kernels();

namespace detail {
extern const KernelTable kScalarTable;
#if defined(HELITACK_HAVE_AVX2)
extern const KernelTable kAvx2Table;
#endif
} // namespace detail

} // namespace helitack::simd
