#include <doctest.h>

#include <cstring>
#include <string>
#include <limits>
#include <vector>

#include "geomdep/kernels.hpp"
#include "geomdep/rng.hpp"

using namespace geomdep;

namespace {

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

std::vector<double> random_vec(RngStream& rng, std::size_t n, double scale) {
  std::vector<double> v(n);
  for (auto& x : v) x = scale * rng.exponential();
  return v;
}

}  // namespace

TEST_SUITE("kernels") {
  TEST_CASE("scalar kernels on hand-checked inputs") {
    const double w[] = {0.0, 0.25, 0.5, 0.75, 1.0};
    double out[5];
    kernels::scalar::maxmin_angular(w, 5, 2.0, -1.0, out);
    CHECK(out[0] == 2.0);
    CHECK(out[1] == doctest::Approx(1.25));
    CHECK(out[2] == doctest::Approx(0.5));
    CHECK(out[3] == doctest::Approx(1.25));
    const double x[] = {1, 2, 3, 4, 5, 6, 7};
    const double y[] = {7, 6, 5, 4, 3, 2, 1};
    CHECK(kernels::scalar::dot(x, y, 7) == 84.0);
    CHECK(kernels::scalar::count_joint_exceed(x, y, 7, 2.5, 2.5) == 3);
    CHECK(kernels::scalar::count_in_rect(x, y, 7, 1.0, 6.0, 0.0, 100.0) == 4);
    double r[7], ww[7];
    kernels::scalar::to_radial_angular(x, y, 7, r, ww);
    CHECK(r[0] == 8.0);
    CHECK(ww[0] == 0.125);
  }

  TEST_CASE("dispatch reports a level and can be pinned") {
    kernels::force_level(kernels::SimdLevel::Scalar);
    CHECK(kernels::active_level() == kernels::SimdLevel::Scalar);
    kernels::reset_level();
    if (!kernels::avx2_available()) CHECK(kernels::active_level() == kernels::SimdLevel::Scalar);
    CHECK(std::string(kernels::level_name(kernels::SimdLevel::Avx2)) == "avx2");
  }

  TEST_CASE("AVX2 kernels agree with scalar kernels bit for bit") {
    if (!kernels::avx2_available()) {
      MESSAGE("AVX2 not available; skipped");
      return;
    }
    RngStream rng(77, 1);
    for (std::size_t n : {0, 1, 3, 4, 5, 7, 8, 9, 15, 16, 17, 63, 1000, 4099}) {
      auto x = random_vec(rng, n, 2.0);
      auto y = random_vec(rng, n, 2.0);
      std::vector<double> w(n);
      for (auto& v : w) v = rng.uniform();
      if (n > 2) w[0] = 0.0, w[1] = 1.0, w[2] = 0.5;

      std::vector<double> a(n), b(n);
      kernels::scalar::maxmin_angular(w.data(), n, 2.5, -1.5, a.data());
      kernels::avx2::maxmin_angular(w.data(), n, 2.5, -1.5, b.data());
      for (std::size_t i = 0; i < n; ++i) REQUIRE(same_bits(a[i], b[i]));

      REQUIRE(same_bits(kernels::scalar::dot(x.data(), y.data(), n), kernels::avx2::dot(x.data(), y.data(), n)));

      for (double u : {0.0, 0.5, 1.0, 3.0}) {
        REQUIRE(kernels::scalar::count_joint_exceed(x.data(), y.data(), n, u, u) ==
                kernels::avx2::count_joint_exceed(x.data(), y.data(), n, u, u));
        const double inf = std::numeric_limits<double>::infinity();
        REQUIRE(kernels::scalar::count_in_rect(x.data(), y.data(), n, u, inf, 0.0, u + 1.0) ==
                kernels::avx2::count_in_rect(x.data(), y.data(), n, u, inf, 0.0, u + 1.0));
      }

      std::vector<double> r1(n), w1(n), r2(n), w2(n);
      kernels::scalar::to_radial_angular(x.data(), y.data(), n, r1.data(), w1.data());
      kernels::avx2::to_radial_angular(x.data(), y.data(), n, r2.data(), w2.data());
      for (std::size_t i = 0; i < n; ++i) {
        REQUIRE(same_bits(r1[i], r2[i]));
        REQUIRE(same_bits(w1[i], w2[i]));
      }
    }
  }

  TEST_CASE("counts treat ties as outside and handle NaN-free boundaries") {
    const double x[] = {1.0, 1.0, 2.0, 2.0, 0.5};
    const double y[] = {1.0, 2.0, 1.0, 2.0, 3.0};
    for (auto level : {kernels::SimdLevel::Scalar, kernels::SimdLevel::Avx2}) {
      if (level == kernels::SimdLevel::Avx2 && !kernels::avx2_available()) continue;
      kernels::force_level(level);
      CHECK(kernels::count_joint_exceed(x, y, 5, 1.0, 1.0) == 1);
      CHECK(kernels::count_in_rect(x, y, 5, 0.5, 2.0, 0.0, 10.0) == 2);
    }
    kernels::reset_level();
  }
}
