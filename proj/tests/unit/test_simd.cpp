#include "helitack/rng.hpp"
#include "helitack/simd/kernels.hpp"

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <vector>

using namespace helitack;

namespace {

std::vector<const simd::KernelTable*> tables() {
  std::vector<const simd::KernelTable*> t{&simd::kernels(simd::Isa::Scalar)};
  if (simd::isa_supported(simd::Isa::Avx2)) t.push_back(&simd::kernels(simd::Isa::Avx2));
  return t;
}

bool same_bits(const std::vector<float>& a, const std::vector<float>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(float)) == 0;
}

} // namespace

TEST_CASE("dispatch honours the scalar override") {
  const char* env = std::getenv("HELITACK_SIMD");
  if (env && std::string(env) == "scalar") CHECK(simd::kernels().isa == simd::Isa::Scalar);
  CHECK(simd::isa_supported(simd::Isa::Scalar));
}

TEST_CASE("kernel variants agree bit for bit") {
  const auto ts = tables();
  Rng rng(99);
  const std::array<float, 4> lut = {0.0f, 2.0f / 3.0f, 1.0f, 1.0f / 3.0f};
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = rng.below(700);
    std::vector<std::uint8_t> codes(n);
    for (auto& c : codes) c = static_cast<std::uint8_t>(rng.below(4));
    std::vector<float> ref(n), got(n);
    ts[0]->map_codes(codes.data(), n, lut, ref.data());
    for (auto* t : ts) {
      std::fill(got.begin(), got.end(), -1.0f);
      t->map_codes(codes.data(), n, lut, got.data());
      CHECK(same_bits(ref, got));
      CHECK(t->count_equal_u8(codes.data(), n, 1) == ts[0]->count_equal_u8(codes.data(), n, 1));
    }

    const int w = static_cast<int>(rng.between(1, 41)), h = static_cast<int>(rng.between(1, 29));
    std::vector<float> img(static_cast<std::size_t>(w) * h);
    for (auto& v : img) v = rng.uniform() < 0.3 ? lut[rng.below(4)] : static_cast<float>(rng.uniform());
    const std::size_t on = static_cast<std::size_t>((w + 1) / 2) * ((h + 1) / 2);
    std::vector<float> pref(on), pgot(on);
    ts[0]->max_pool2x(img.data(), w, h, pref.data());
    std::vector<std::uint32_t> iref(img.size()), igot(img.size());
    const std::size_t kref = ts[0]->collect_equal_f32(img.data(), img.size(), lut[1], iref.data());
    for (auto* t : ts) {
      t->max_pool2x(img.data(), w, h, pgot.data());
      CHECK(same_bits(pref, pgot));
      const std::size_t k = t->collect_equal_f32(img.data(), img.size(), lut[1], igot.data());
      REQUIRE(k == kref);
      CHECK(std::equal(iref.begin(), iref.begin() + k, igot.begin()));
    }

    const std::size_t m = rng.below(300);
    std::vector<double> xs(m), ys(m), zs(m);
    for (std::size_t i = 0; i < m; ++i) {
      xs[i] = rng.uniform(-1, 1);
      ys[i] = rng.uniform(-1, 1);
      zs[i] = rng.uniform(-1, 1);
    }
    const double qx = rng.uniform(-1, 1), qy = rng.uniform(-1, 1), qz = rng.uniform(-1, 1);
    const double dref = ts[0]->min_dist2(xs.data(), ys.data(), zs.data(), m, qx, qy, qz);
    for (auto* t : ts) {
      const double d = t->min_dist2(xs.data(), ys.data(), zs.data(), m, qx, qy, qz);
      CHECK(std::memcmp(&d, &dref, sizeof d) == 0);
    }
    if (m == 0) CHECK(std::isinf(dref));
  }
}

TEST_CASE("max pool handles odd edges") {
  const float img[] = {1, 2, 3, 4, 5, 6}; // 3 x 2
  for (auto* t : tables()) {
    float out[2] = {};
    t->max_pool2x(img, 3, 2, out);
    CHECK(out[0] == 5.0f);
    CHECK(out[1] == 6.0f);
  }
}
