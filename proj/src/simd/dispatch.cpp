#include "helitack/simd/kernels.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace helitack::simd {

bool isa_supported(Isa isa) {
  switch (isa) {
  case Isa::Scalar:
    return true;
  case Isa::Avx2:
#if defined(HELITACK_HAVE_AVX2)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
  }
  return false;
}

std::string_view to_string(Isa isa) {
  switch (isa) {
  case Isa::Scalar: return "scalar";
  case Isa::Avx2: return "avx2";
  }
  return "unknown";
}

const KernelTable& kernels(Isa isa) {
  if (!isa_supported(isa)) {
    throw std::runtime_error("SIMD variant not supported here: " + std::string(to_string(isa)));
  }
#if defined(HELITACK_HAVE_AVX2)
  if (isa == Isa::Avx2) return detail::kAvx2Table;
#endif
  return detail::kScalarTable;
}

const KernelTable& kernels() {
  static const KernelTable& active = [] () -> const KernelTable& {
    const char* forced = std::getenv("HELITACK_SIMD");
    if (forced && std::string(forced) == "scalar") return kernels(Isa::Scalar);
    return isa_supported(Isa::Avx2) ? kernels(Isa::Avx2) : kernels(Isa::Scalar);
  }();
  return active;
}

} // namespace helitack::simd
