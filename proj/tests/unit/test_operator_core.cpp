#include <algorithm>
#include <numeric>
#include <random>

#include "doctest.h"
#include "slopekit/error.hpp"
#include "slopekit/spectral.hpp"

using namespace slopekit;

namespace {

PadicMatrix random_matrix(const Modulus& mod, std::size_t n, std::mt19937_64& rng) {
  PadicMatrix a(mod, n, n);
  std::uniform_int_distribution<long long> dist(0, static_cast<long long>(mod.value()) - 1);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = static_cast<Residue>(dist(rng));
  return a;
}

// Unimodular: product of unit-diagonal triangular factors.
PadicMatrix random_unimodular(const Modulus& mod, std::size_t n, std::mt19937_64& rng) {
  PadicMatrix l = random_matrix(mod, n, rng);
  PadicMatrix u = random_matrix(mod, n, rng);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (j > i) l(i, j) = 0;
      if (j < i) u(i, j) = 0;
    }
  for (std::size_t i = 0; i < n; ++i) l(i, i) = u(i, i) = 1;
  return l * u;
}

// Schoolbook product, independent of PadicMatrix::operator*.
std::vector<std::vector<BigInt>> naive_mul(const std::vector<std::vector<BigInt>>& a,
                                           const std::vector<std::vector<BigInt>>& b, const BigInt& pm) {
  const std::size_t n = a.size();
  std::vector<std::vector<BigInt>> c(n, std::vector<BigInt>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      BigInt s = 0;
      for (std::size_t k = 0; k < n; ++k) s += a[i][k] * b[k][j];
      c[i][j] = s % pm;
    }
  return c;
}

std::vector<std::vector<BigInt>> to_big(const PadicMatrix& a) {
  std::vector<std::vector<BigInt>> out(a.rows(), std::vector<BigInt>(a.cols()));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out[i][j] = to_bigint(a(i, j));
  return out;
}

// Leibniz expansion of det over Z, reduced mod pm.
BigInt leibniz_det(const std::vector<std::vector<BigInt>>& a, const BigInt& pm) {
  const std::size_t n = a.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  BigInt total = 0;
  do {
    int inversions = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (perm[i] > perm[j]) ++inversions;
    BigInt term = inversions % 2 ? -1 : 1;
    for (std::size_t i = 0; i < n; ++i) term *= a[i][perm[i]];
    total += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  total %= pm;
  if (total < 0) total += pm;
  return total;
}

CharSeries exact_series(const Modulus& mod, std::vector<long long> coeffs) {
  CharSeries s;
  s.p = mod.p();
  for (long long c : coeffs) s.coeffs.push_back(PadicScalar::from_int(mod, c));
  refresh_reliable_degree(s);
  return s;
}

}  // namespace

TEST_CASE("projector examples") {
  const Modulus mod(5, 3);
  auto r = ordinary_projector(PadicMatrix::from_rows(mod, {{1, 0}, {0, 5}}));
  CHECK(r.rank == 1);
  CHECK(r.idempotent == PadicMatrix::from_rows(mod, {{1, 0}, {0, 0}}));

  r = ordinary_projector(PadicMatrix::identity(mod, 2).scaled(5));
  CHECK(r.rank == 0);
  CHECK(r.idempotent.is_zero());

  r = ordinary_projector(PadicMatrix::from_rows(mod, {{0, 1}, {5, 0}}));
  CHECK(r.idempotent.is_zero());

  CHECK_THROWS_AS(ordinary_projector(PadicMatrix(mod, 2, 3)), InvalidArgument);
}

TEST_CASE("projector agrees with brute-force factorial powers") {
  std::mt19937_64 rng(11);
  for (auto [p, m] : {std::pair{5, 4}, std::pair{7, 3}}) {
    const Modulus mod(p, m);
    const BigInt pm = to_bigint(mod.value());
    for (int trial = 0; trial < 20; ++trial) {
      const PadicMatrix t = random_matrix(mod, 3, rng);
      // T^{31!}: a multiple of every element order of GL_3(Z/p^m) here and of the nilpotency index.
      auto x = to_big(t);
      for (int j = 2; j <= 31; ++j) {
        auto base = x;
        for (int s = 1; s < j; ++s) x = naive_mul(x, base, pm);
      }
      const auto e = ordinary_projector(t).idempotent;
      CHECK(to_big(e) == x);
    }
  }
}

TEST_CASE("projector properties on random matrices") {
  std::mt19937_64 rng(7);
  for (auto [p, m] : {std::pair{5, 4}, std::pair{7, 3}}) {
    const Modulus mod(p, m);
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t n = 1 + trial % 5;
      const PadicMatrix t = random_matrix(mod, n, rng);
      const auto r = ordinary_projector(t);
      const PadicMatrix& e = r.idempotent;
      CHECK(e * e == e);
      CHECK(e * t == t * e);
      const PadicMatrix id = PadicMatrix::identity(mod, n);
      const PadicMatrix f = id - e;
      // Unit on the image: T e + (1 - e) is invertible mod p.
      CHECK(mod.valuation(determinant(t * e + f)) == 0);
      // Nilpotent mod p on the kernel.
      const std::size_t kr = rank_mod_p(f);
      CHECK(((t * f).pow(std::max<std::size_t>(kr, 1))).reduced(1).is_zero());
      CHECK(r.rank + kr == n);
    }
  }
}

TEST_CASE("projector is exact on block-triangular sequences") {
  std::mt19937_64 rng(3);
  const Modulus mod(5, 4);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t a = 1 + trial % 3, b = 1 + (trial / 3) % 3;
    PadicMatrix t = random_matrix(mod, a + b, rng);
    for (std::size_t i = a; i < a + b; ++i)
      for (std::size_t j = 0; j < a; ++j) t(i, j) = 0;
    std::vector<std::size_t> sub(a), quot(b);
    std::iota(sub.begin(), sub.end(), 0);
    std::iota(quot.begin(), quot.end(), a);
    const auto r_sub = ordinary_projector(t.submatrix(sub, sub)).rank;
    const auto r_quot = ordinary_projector(t.submatrix(quot, quot)).rank;
    CHECK(r_sub + r_quot == ordinary_projector(t).rank);
  }
}

TEST_CASE("projector reduction matches the mod-p projector") {
  std::mt19937_64 rng(5);
  const Modulus mod(7, 3);
  for (int trial = 0; trial < 50; ++trial) {
    const PadicMatrix t = random_matrix(mod, 4, rng);
    const auto lifted = ordinary_projector(t).idempotent;
    const auto modp = ordinary_projector(t.reduced(1)).idempotent;
    CHECK(lifted.reduced(1) == modp);
  }
}

TEST_CASE("characteristic series examples") {
  const Modulus mod(5, 5);
  auto s = char_series(PadicMatrix(mod, 2, 2));
  CHECK(s.coeffs[1].is_zero());
  CHECK(s.coeffs[2].is_zero());

  s = char_series(PadicMatrix::identity(mod, 2));
  CHECK(s.coeffs[1] == PadicScalar::from_int(mod, -2));
  CHECK(s.coeffs[2] == PadicScalar::from_int(mod, 1));

  s = char_series(PadicMatrix::from_rows(mod, {{1, 1}, {0, 5}}));
  CHECK(s.coeffs[0] == PadicScalar::from_int(mod, 1));
  CHECK(s.coeffs[1] == PadicScalar::from_int(mod, -6));
  CHECK(s.coeffs[2] == PadicScalar::from_int(mod, 5));
}

TEST_CASE("characteristic series matches a Leibniz determinant") {
  std::mt19937_64 rng(17);
  const Modulus mod(7, 4);
  const BigInt pm = to_bigint(mod.value());
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + trial % 4;
    const PadicMatrix u = random_matrix(mod, n, rng);
    const auto s = char_series(u);
    CHECK(s.coeffs[1].residue() == mod.neg(u.trace()));
    // Compare det(I - tU) at n+1 sample points t.
    for (long long t = 1; t <= static_cast<long long>(n) + 1; ++t) {
      auto a = to_big(u);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a[i][j] = (i == j ? 1 : 0) - t * a[i][j];
      BigInt value = 0, tp = 1;
      for (const auto& c : s.coeffs) {
        value += c.lift() * tp;
        tp *= t;
      }
      value %= pm;
      CHECK(value == leibniz_det(a, pm));
    }
  }
}

TEST_CASE("reversed characteristic series of a unimodular matrix") {
  // For unimodular U of size n: T^n det(U) det(1 - T^{-1} U^{-1}) = det(TU - 1) = (-1)^n det(1 - TU).
  std::mt19937_64 rng(23);
  const Modulus mod(5, 4);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + trial % 2;
    const PadicMatrix u = random_unimodular(mod, n, rng);
    const auto direct = char_series(u);
    const auto inv = char_series(inverse(u));
    const Residue det = determinant(u);
    for (std::size_t j = 0; j <= n; ++j) {
      Residue lhs = mod.mul(det, inv.coeffs[n - j].residue());
      Residue rhs = direct.coeffs[j].residue();
      if (n % 2) rhs = mod.neg(rhs);
      CHECK(lhs == rhs);
    }
  }
}

TEST_CASE("Newton polygon examples") {
  const Modulus mod(5, 5);
  auto poly = newton_polygon(exact_series(mod, {1, -6, 5}));
  REQUIRE(poly.slopes.size() == 2);
  CHECK(poly.slopes[0].value == Rational(0));
  CHECK(poly.slopes[1].value == Rational(1));
  CHECK_FALSE(poly.truncated);

  poly = newton_polygon(exact_series(mod, {1, -1}));
  REQUIRE(poly.slopes.size() == 1);
  CHECK(poly.slopes[0].value == Rational(0));

  poly = newton_polygon(exact_series(mod, {1, -126, 125}));
  REQUIRE(poly.slopes.size() == 2);
  CHECK(poly.slopes[0].value == Rational(0));
  CHECK(poly.slopes[1].value == Rational(3));

  poly = newton_polygon(exact_series(mod, {1, 0, 0}));
  CHECK(poly.empty_warning);
  CHECK(poly.slopes.empty());

  CHECK_THROWS_AS(newton_polygon(exact_series(mod, {2, 1})), InvalidArgument);
}

TEST_CASE("Newton polygon stops at an undetermined vertex") {
  // (1 - T)(1 - 125T)(1 - 5^6 T) over 5^5: the last root is invisible.
  const Modulus mod(5, 5);
  const auto s = exact_series(mod, {1, -(1 + 125 + 15625), 125 + 15625 + 125LL * 15625, -125LL * 15625});
  const auto poly = newton_polygon(s);
  REQUIRE(poly.slopes.size() >= 1);
  CHECK(poly.slopes[0].value == Rational(0));
  CHECK(poly.truncated);
  CHECK(poly.complete_below.has_value());
  for (const auto& sl : poly.slopes) CHECK(sl.value < *poly.complete_below);
}

TEST_CASE("Newton polygon is a conjugation invariant") {
  std::mt19937_64 rng(29);
  const Modulus mod(5, 6);
  for (int trial = 0; trial < 10; ++trial) {
    PadicMatrix u = random_matrix(mod, 4, rng);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) u(i, j) = mod.mul(u(i, j), mod.p_power(static_cast<int>(i)));
    const auto base = newton_polygon(char_series(u)).flattened();
    for (int c = 0; c < 5; ++c) {
      const PadicMatrix g = random_unimodular(mod, 4, rng);
      CHECK(newton_polygon(char_series(g * u * inverse(g))).flattened() == base);
    }
  }
}

TEST_CASE("solve in basis") {
  const Modulus mod(5, 3);
  auto r = solve_in_basis(PadicMatrix::from_rows(mod, {{3}, {4}}), PadicMatrix::identity(mod, 2));
  CHECK(r.coordinates == PadicMatrix::from_rows(mod, {{3}, {4}}));
  CHECK(r.precision_loss == 0);

  r = solve_in_basis(PadicMatrix::from_rows(mod, {{0}, {5}}), PadicMatrix::from_rows(mod, {{1, 0}, {0, 5}}));
  CHECK(r.coordinates.reduced(2) == PadicMatrix::from_rows(mod, {{0}, {1}}).reduced(2));
  CHECK(r.precision_loss == 1);
  CHECK(r.precision == 2);

  CHECK_THROWS_AS(solve_in_basis(PadicMatrix::from_rows(mod, {{0}, {5}}),
                                 PadicMatrix::from_rows(mod, {{1, 0}, {0, 5}}), 0),
                  PrecisionError);

  std::mt19937_64 rng(31);
  const Modulus big(7, 5);
  for (int trial = 0; trial < 20; ++trial) {
    const PadicMatrix b = random_unimodular(big, 4, rng);
    const PadicMatrix v = random_matrix(big, 4, rng);
    const auto s = solve_in_basis(v, b);
    CHECK(s.precision_loss == 0);
    CHECK(b * s.coordinates == v);
  }
}

TEST_CASE("determinant and inverse") {
  std::mt19937_64 rng(37);
  const Modulus mod(5, 4);
  const BigInt pm = to_bigint(mod.value());
  for (int trial = 0; trial < 30; ++trial) {
    const PadicMatrix a = random_matrix(mod, 1 + trial % 5, rng);
    CHECK(to_bigint(determinant(a)) == leibniz_det(to_big(a), pm));
  }
  const PadicMatrix u = random_unimodular(mod, 4, rng);
  CHECK(u * inverse(u) == PadicMatrix::identity(mod, 4));
}

TEST_CASE("scalar arithmetic") {
  const Modulus mod(5, 4);
  const auto x = PadicScalar::from_int(mod, 50);
  CHECK(x.valuation() == 2);
  CHECK(PadicScalar::from_int(mod, 0).valuation() == 4);
  CHECK((x * x).is_zero());
  const auto q = x.divide(PadicScalar::from_int(mod, 25));
  CHECK(q.precision() == 2);
  CHECK(q.residue() == 2);
  CHECK_THROWS_AS(PadicScalar::from_int(mod, 1).divide(PadicScalar::from_int(mod, 5)), PrecisionError);
  CHECK(PadicScalar::from_int(mod, 3).inverse() * PadicScalar::from_int(mod, 3) == PadicScalar::from_int(mod, 1));
  CHECK_THROWS(Modulus(4, 2));
  CHECK_THROWS_AS(Modulus(5, 60), PrecisionError);
}
