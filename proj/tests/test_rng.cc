#include <cmath>
#include <set>

#include "doctest.h"
#include "gpdqc/rng.h"

using namespace gpdqc;

// Known answers from the Random123 reference implementation.
TEST_CASE("philox4x64-10 known answers") {
  auto a = philox4x64_10({0, 0, 0, 0}, {0, 0});
  CHECK(a[0] == 0x16554d9eca36314cULL);
  CHECK(a[1] == 0xdb20fe9d672d0fdcULL);
  CHECK(a[2] == 0xd7e772cee186176bULL);
  CHECK(a[3] == 0x7e68b68aec7ba23bULL);
  auto b = philox4x64_10({1, 0, 0, 0}, {0, 0});
  CHECK(b[0] == 0x02f4ba6408e4d89bULL);
  CHECK(b[3] == 0x907d7a052fd5b4dcULL);
  auto c = philox4x64_10({4, 4, 5, 6}, {1, 2});
  CHECK(c[0] == 0x8070e5788d05927eULL);
  CHECK(c[1] == 0x1c5aef1cb5451508ULL);
  CHECK(c[2] == 0xd04b22ec4863e2a0ULL);
  CHECK(c[3] == 0xd67cc7da10e919ceULL);
}

TEST_CASE("identical seed and stream reproduce the sequence") {
  RngStream a(42, 7), b(42, 7);
  for (int i = 0; i < 1000; ++i) CHECK(a() == b());
  RngStream c(42, 7), d(42, 7);
  for (int i = 0; i < 1000; ++i) CHECK(c.normal() == d.normal());
}

TEST_CASE("different streams and seeds differ") {
  RngStream a(42, 0), b(42, 1), c(43, 0);
  int same_ab = 0, same_ac = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto x = a(), y = b(), z = c();
    same_ab += x == y;
    same_ac += x == z;
  }
  CHECK(same_ab == 0);
  CHECK(same_ac == 0);
}

TEST_CASE("uniform lies in the open unit interval with correct moments") {
  RngStream rng(1);
  const int n = 1000000;
  double sum = 0, sum2 = 0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    sum += u;
    sum2 += u * u;
  }
  const double mean = sum / n;
  CHECK(std::abs(mean - 0.5) < 3 * std::sqrt(1.0 / 12 / n) * 1.5);
  CHECK(std::abs(sum2 / n - mean * mean - 1.0 / 12) < 1e-3);
}

TEST_CASE("normal moments") {
  RngStream rng(2);
  const int n = 1000000;
  double sum = 0, sum2 = 0, sum4 = 0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    sum += z;
    sum2 += z * z;
    sum4 += z * z * z * z;
  }
  CHECK(std::abs(sum / n) < 4.0 / std::sqrt(n));
  CHECK(std::abs(sum2 / n - 1) < 4 * std::sqrt(2.0 / n));
  CHECK(std::abs(sum4 / n - 3) < 4 * std::sqrt(96.0 / n));
}
