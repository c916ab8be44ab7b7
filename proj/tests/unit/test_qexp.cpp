#include <random>

#include "doctest.h"
#include "slopekit/error.hpp"
#include "slopekit/qexp.hpp"
#include "slopekit/spectral.hpp"

using namespace slopekit;
using namespace slopekit::qexp;

namespace {

QSeries random_series(CoefficientRing ring, int q, std::mt19937_64& rng) {
  std::uniform_int_distribution<long long> dist(-1000, 1000);
  std::vector<BigInt> v(static_cast<std::size_t>(q));
  for (auto& x : v) x = dist(rng);
  return QSeries(ring, std::move(v));
}

}  // namespace

TEST_CASE("Bernoulli numbers and divisor sums") {
  CHECK(bernoulli(2) == BigRational(1, 6));
  CHECK(bernoulli(4) == BigRational(-1, 30));
  CHECK(bernoulli(8) == BigRational(-1, 30));
  CHECK(bernoulli(12) == BigRational(-691, 2730));
  CHECK(divisor_sigma(2, 3) == 9);
  CHECK(divisor_sigma(2, 5) == 33);
  CHECK(divisor_sigma(12, 1) == 28);
}

TEST_CASE("Eisenstein series") {
  auto e4 = eisenstein(4, 3);
  CHECK(e4 == QSeries(CoefficientRing::integers(), {1, 240, 2160}));
  CHECK(eisenstein(6, 3) == QSeries(CoefficientRing::integers(), {1, -504, -16632}));
  CHECK(eisenstein(8, 2) == QSeries(CoefficientRing::integers(), {1, 480}));
  CHECK_THROWS_AS(eisenstein(5, 3), InvalidArgument);
  CHECK_THROWS_AS(eisenstein(2, 3), InvalidArgument);
  // E_12 has denominator 691: fine mod 5^3, not over Z.
  CHECK_THROWS_AS(eisenstein(12, 3), InvalidArgument);
  CHECK(eisenstein(12, 3, CoefficientRing::mod_pm(5, 3)).qprec() == 3);
  // E_8 = E_4^2 at level one.
  CHECK(eisenstein(8, 30) == eisenstein(4, 30).pow(2));
}

TEST_CASE("Delta from the product formula") {
  const auto d = delta(7);
  const std::vector<long long> tau{0, 1, -24, 252, -1472, 4830, -6048};
  for (int n = 0; n < 7; ++n) CHECK(d[n] == tau[n]);
  // Independent route: (E_4^3 - E_6^2) / 1728.
  const auto e4 = eisenstein(4, 40), e6 = eisenstein(6, 40);
  const auto diff = e4.pow(3) - e6.pow(2);
  const auto dl = delta(40);
  for (int n = 0; n < 40; ++n) CHECK(diff[n] == 1728 * dl[n]);
}

TEST_CASE("dimensions and Miller bases") {
  CHECK(basis_dimension(0) == 1);
  CHECK(basis_dimension(2) == 0);
  CHECK(basis_dimension(12) == 2);
  CHECK(basis_dimension(14) == 1);
  CHECK(basis_dimension(-4) == 0);
  CHECK(basis_dimension(7) == 0);

  const auto b0 = miller_basis(0, 5);
  REQUIRE(b0.dim() == 1);
  CHECK(b0.forms[0] == QSeries::one(CoefficientRing::integers(), 5));
  CHECK(miller_basis(2, 5).dim() == 0);
  const auto b12 = miller_basis(12, 5);
  REQUIRE(b12.dim() == 2);
  CHECK(b12.forms[1][1] == 1);
  CHECK(b12.forms[1][2] == -24);
  CHECK_THROWS_AS(miller_basis(3, 5), InvalidArgument);

  for (int k = 0; k <= 60; k += 2) {
    const auto b = miller_basis(k, 80);
    CHECK(b.dim() == basis_dimension(k));
    for (int j = 0; j < b.dim(); ++j)
      for (int i = 0; i < b.dim(); ++i) CHECK(b.forms[j][i] == (i == j ? 1 : 0));
  }
}

TEST_CASE("Hasse invariant") {
  for (int p : {5, 7, 11, 13}) {
    const auto h = hasse_invariant(p, 200);
    CHECK(h == QSeries::one(CoefficientRing::mod_pm(p, 1), 200));
  }
  CHECK_THROWS_AS(hasse_invariant(3, 10), UnsupportedError);
}

TEST_CASE("Hecke eigenforms") {
  const auto e4 = eisenstein(4, 250);
  CHECK(hecke_tp(e4, 4, 5) == e4.truncated(50).scaled(126));
  const auto d = delta(100);
  CHECK(hecke_tp(d, 12, 2) == d.truncated(50).scaled(-24));
  CHECK_THROWS_AS(hecke_tp(eisenstein(4, 4), 4, 5), PrecisionError);
}

TEST_CASE("Hecke operator identities") {
  std::mt19937_64 rng(41);
  const auto z = CoefficientRing::integers();
  for (int trial = 0; trial < 100; ++trial) {
    const auto f = random_series(z, 60, rng);
    // The two branches coincide at k = 1.
    const auto t1 = hecke_tp(f, 1, 5);
    std::vector<BigInt> manual(static_cast<std::size_t>(t1.qprec()));
    for (int n = 0; n < t1.qprec(); ++n) manual[n] = f[5 * n] + (n % 5 == 0 ? f[n / 5] : BigInt(0));
    CHECK(t1 == QSeries(z, manual));
    // U_naive o theta = p theta o U_naive.
    CHECK(up_naive(theta(f), 5) == theta(up_naive(f, 5)).scaled(5));
  }
  const auto e4 = eisenstein(4, 100);
  for (int k = 4; k <= 20; k += 2) {
    const auto f = random_series(z, 100, rng);
    const auto t = hecke_tp(f, k, 5);
    const auto rhs = up(f, k, 5) + frobenius_f(f, k, 5).truncated(t.qprec()).scaled(boost::multiprecision::pow(BigInt(5), k - 1));
    CHECK(t == rhs);
  }
  for (int k : {0, -2, -4}) {
    const auto f = random_series(z, 100, rng);
    CHECK(hecke_tp(f, k, 7) == up(f, k, 7) + frobenius_f(f, k, 7).truncated(100 / 7));
    CHECK(up(f, k, 7).scaled(7) == up_naive(f, 7).scaled(boost::multiprecision::pow(BigInt(7), 1 - k)));
  }
  const auto t5e4 = hecke_tp(e4, 4, 5);
  const auto split = up(e4, 4, 5) + frobenius_f(e4, 4, 5).truncated(20).scaled(125);
  CHECK(t5e4 == split);

  CHECK(frobenius_f(QSeries::one(z, 10), 0, 5) == QSeries::one(z, 10));
  CHECK(frobenius_f(QSeries::monomial(z, 10, 1), 0, 5) == QSeries::monomial(z, 10, 5));
  CHECK(theta(QSeries::one(z, 10)).is_zero());
  CHECK(theta(QSeries::monomial(z, 10, 1)) == QSeries::monomial(z, 10, 1));
  CHECK(up_naive(QSeries::monomial(z, 50, 1), 5).is_zero());
  std::vector<BigInt> ones(50, 1);
  ones[0] = 0;
  CHECK(up(QSeries(z, ones), 2, 5) == QSeries(z, ones).truncated(10));
}

TEST_CASE("p-stabilised E_4 has U_5 eigenvalue 1") {
  const auto e4 = eisenstein(4, 500);
  const auto stab = e4.truncated(100) - frobenius_f(e4.truncated(100), 4, 5).scaled(125);
  CHECK(up(stab, 4, 5) == stab.truncated(20));
}

TEST_CASE("Hecke matrices on Miller bases") {
  for (auto [p, l] : {std::pair{5, 2}, std::pair{7, 3}}) {
    for (int k : {12, 16, 20}) {
      const int d = basis_dimension(k);
      const auto b = miller_basis(k, p * l * d + 10);
      const Modulus mod(p, 6);
      const auto tp = operator_matrix(b, [&](const QSeries& f) { return hecke_tp(f, k, p); }, mod);
      const auto tl = operator_matrix(b, [&](const QSeries& f) { return hecke_tp(f, k, l); }, mod);
      CHECK(tp.closed);
      CHECK(tl.closed);
      CHECK(tp.matrix * tl.matrix == tl.matrix * tp.matrix);
    }
  }
  // U_p does not preserve level one, but agrees with T_p mod p.
  for (int p : {5, 7})
    for (int k = 2; k <= 40; k += 2) {
      const auto b = miller_basis(k, p * (basis_dimension(k) + 4));
      const Modulus mod(p, 1);
      const auto tp = operator_matrix(b, [&](const QSeries& f) { return hecke_tp(f, k, p); }, mod);
      const auto u = operator_matrix(b, [&](const QSeries& f) { return up(f, k, p); }, mod);
      CHECK(u.closed);
      CHECK(tp.matrix == u.matrix);
    }
}

TEST_CASE("weight coordinates") {
  const Modulus mod(5, 4);
  CHECK(weight_coordinate(0, mod).is_zero());
  CHECK(weight_coordinate(4, mod).residue() == 1295 % 625);
  const auto wm = weight_point(-4, mod);
  CHECK(wm.component == 0);
  // (1+p)^{-4} (1+p)^4 = 1.
  const Residue a = mod.add(wm.w.residue(), 1), b = mod.add(weight_coordinate(4, mod).residue(), 1);
  CHECK(mod.mul(a, b) == 1);
  CHECK(weight_point(6, mod).component == 2);
  CHECK(supported_prime(11));
  CHECK_FALSE(supported_prime(3));
  CHECK_THROWS_AS(require_supported_prime(17), UnsupportedError);
}
