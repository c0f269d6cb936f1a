#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cmath>
#include <random>

#include "ckosc/algebra.hpp"
#include "ckosc/errors.hpp"

using namespace ckosc;

namespace {

constexpr std::array<int, 3> kSigmas = {1, 0, -1};

// Oracle: multiply as bivariate polynomials in j2, j3 with exponents up to
// 2, then fold j^2 -> sigma by hand. Shares nothing with the product table.
CKScalar poly_mul(const CKScalar& x, const CKScalar& y) {
  const Signature sig = x.signature();
  auto coeffs = [](const CKScalar& s) {
    std::array<std::array<double, 2>, 2> c{};
    c[0][0] = s.real();
    c[1][0] = s.j2();
    c[0][1] = s.j3();
    c[1][1] = s.j23();
    return c;
  };
  const auto a = coeffs(x), b = coeffs(y);
  std::array<std::array<double, 3>, 3> p{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) p[i + k][j + l] += a[i][j] * b[k][l];
  std::array<std::array<double, 2>, 2> r{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const double w = (i == 2 ? sig.sigma2 : 1) * (j == 2 ? sig.sigma3 : 1);
      r[i % 2][j % 2] += w * p[i][j];
    }
  }
  return {r[0][0], r[1][0], r[0][1], r[1][1], sig};
}

CKScalar random_scalar(std::mt19937_64& rng, Signature sig) {
  std::uniform_real_distribution<double> u(-2, 2);
  return {u(rng), u(rng), u(rng), u(rng), sig};
}

bool close(const CKScalar& a, const CKScalar& b, double tol = 1e-13) {
  return std::fabs(a.real() - b.real()) <= tol && std::fabs(a.j2() - b.j2()) <= tol &&
         std::fabs(a.j3() - b.j3()) <= tol && std::fabs(a.j23() - b.j23()) <= tol;
}

}  // namespace

TEST_CASE("signature validation") {
  CHECK_THROWS_AS(Signature(2, 0), InvalidSignature);
  CHECK_THROWS_AS(Signature(0, -2), InvalidSignature);
  CHECK(Signature(0, 1).nilpotent2());
  CHECK_FALSE(Signature(0, 1).nilpotent3());
}

TEST_CASE("addition") {
  const Signature dual{0, 0};
  const CKScalar sum = CKScalar(1, 2, 0, 0, dual) + CKScalar(3, 0, 0, 1, dual);
  CHECK(sum == CKScalar(4, 2, 0, 1, dual));
  const CKScalar x(1.5, -2, 0.25, 7, dual);
  CHECK(x + CKScalar(0.0, dual) == x);
  CHECK((CKScalar(1, 1, 0, 0, dual) + CKScalar(-1, -1, 0, 0, dual)).is_zero());
  CHECK_THROWS_AS(CKScalar(1.0, dual) + CKScalar(1.0, Signature{1, 0}), SignatureMismatch);
}

TEST_CASE("products of units") {
  const Signature dual{0, 0};
  const auto i2 = CKScalar::unit(Unit::j2, dual);
  const auto i3 = CKScalar::unit(Unit::j3, dual);
  CHECK((i2 * i2).is_zero());
  CHECK(i2 * i3 == CKScalar::unit(Unit::j23, dual));
  CHECK(i3 * i2 == i2 * i3);
  CHECK(CKScalar::unit(Unit::j2, Signature{1, 1}) * CKScalar::unit(Unit::j2, Signature{1, 1}) ==
        CKScalar(1.0, Signature{1, 1}));
  CHECK(CKScalar::unit(Unit::j2, Signature{-1, 1}) * CKScalar::unit(Unit::j2, Signature{-1, 1}) ==
        CKScalar(-1.0, Signature{-1, 1}));
  const Signature mixed{-1, -1};
  const auto j23 = CKScalar::unit(Unit::j23, mixed);
  CHECK(j23 * j23 == CKScalar(1.0, mixed));
}

TEST_CASE("multiplication matches polynomial oracle") {
  std::mt19937_64 rng(7);
  for (int s2 : kSigmas) {
    for (int s3 : kSigmas) {
      const Signature sig{s2, s3};
      for (int i = 0; i < 200; ++i) {
        const CKScalar x = random_scalar(rng, sig), y = random_scalar(rng, sig);
        REQUIRE(close(x * y, poly_mul(x, y)));
      }
    }
  }
}

TEST_CASE("division by units") {
  const Signature dual{0, 0};
  CHECK(div_unit(CKScalar::unit(Unit::j2, dual), Unit::j2) == CKScalar(1.0, dual));
  CHECK(div_unit(CKScalar(0, 3, 0, 5, dual), Unit::j2) == CKScalar(3, 0, 5, 0, dual));
  CHECK_THROWS_AS(div_unit(CKScalar(1.0, dual), Unit::j2), NonDivisible);
  CHECK_THROWS_AS(div_unit(CKScalar(0, 0, 1, 0, dual), Unit::j2), NonDivisible);
  CHECK(div_unit(CKScalar(0, 0, 0, 4, dual), Unit::j23) == CKScalar(4.0, dual));

  // invertible units: x / j == x * j / sigma
  const Signature mink{-1, 1};
  const CKScalar x(1, 2, 3, 4, mink);
  const CKScalar q = div_unit(x, Unit::j2);
  CHECK(close(q * CKScalar::unit(Unit::j2, mink), x));
}

TEST_CASE("evaluation map") {
  const Signature dual{0, 0};
  CHECK(eval(CKScalar(1, 2, 0, 0, dual), 0.1, 0.0) == doctest::Approx(1.2));
  CHECK(eval(CKScalar(5, 2, 3, 4, dual), 0.0, 0.0) == 5.0);
  CHECK(eval(CKScalar::unit(Unit::j23, dual), 0.1, 0.2) == doctest::Approx(0.02));

  // with j = +-1 the evaluation is an exact ring map
  std::mt19937_64 rng(3);
  const Signature e{1, 1};
  for (int i = 0; i < 100; ++i) {
    const CKScalar x = random_scalar(rng, e), y = random_scalar(rng, e);
    CHECK(eval(x * y, 1.0, -1.0) == doctest::Approx(eval(x, 1.0, -1.0) * eval(y, 1.0, -1.0)));
  }
}

TEST_CASE("text form") {
  const Signature sig{0, -1};
  const CKScalar x(0.1, -2, 1e-300, 3, sig);
  CHECK(parse_scalar(to_string(x), sig) == x);
  CHECK(parse_scalar("4 + 2*j2 + 0*j3 + 1*j2*j3", Signature{0, 0}) == CKScalar(4, 2, 0, 1, Signature{0, 0}));
  CHECK_THROWS_AS(parse_scalar("4 + 2*j9", sig), ParseError);
}
