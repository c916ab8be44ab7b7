#include <algorithm>

#include "doctest.h"
#include "slopekit/coleman.hpp"
#include "slopekit/error.hpp"
#include "slopekit/hida.hpp"

using namespace slopekit;
using namespace slopekit::coleman;

namespace {

std::vector<Rational> rationals(std::initializer_list<std::pair<long long, long long>> xs) {
  std::vector<Rational> out;
  for (auto [n, d] : xs) out.emplace_back(n, d);
  return out;
}

std::vector<Rational> sorted(std::vector<Rational> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_CASE("Katz block structure") {
  CHECK(katz_block_sizes(0, 5, 0) == std::vector<int>{1});
  CHECK(katz_block_sizes(0, 5, 3) == std::vector<int>{1, 0, 0, 1});
  CHECK(katz_dimension(0, 5, 3) == 2);
  CHECK(katz_block_sizes(4, 5, 2) == std::vector<int>{1, 0, 1});
  CHECK(katz_dimension(4, 5, 2) == 2);
  CHECK(katz_block_of(0, 5, 0) == 0);
  CHECK(katz_block_of(0, 5, 1) == 3);
  // Block sizes add up to dim M_{k + I(p-1)} when k >= 0.
  for (int p : {5, 7, 11})
    for (int k = 0; k <= 24; k += 2)
      for (int depth = 0; depth <= 6; ++depth)
        CHECK(katz_dimension(k, p, depth) == qexp::basis_dimension(k + depth * (p - 1)));
}

TEST_CASE("Katz basis elements are echelon") {
  for (auto [k, p] : {std::pair{0, 5}, std::pair{4, 5}, std::pair{-2, 7}, std::pair{6, 11}}) {
    const int depth = 4;
    const int qprec = required_qprec(k, p, depth);
    const auto b = katz_basis(k, p, depth, qprec, 8);
    REQUIRE(b.dim() == katz_dimension(k, p, depth));
    for (int j = 0; j < b.dim(); ++j) {
      CHECK(b.elements[j].index == j);
      CHECK(b.elements[j].block == katz_block_of(k, p, j));
      // Leading term q^j; later coefficients are free.
      for (int i = 0; i <= j; ++i)
        CHECK(PadicScalar(Modulus(p, 8), b.elements[j].expansion[i]).residue() == (i == j ? 1 : 0));
    }
  }
}

TEST_CASE("normalization and decay helpers") {
  CHECK(normalization_shift(4, Normalization::Normalized) == 0);
  CHECK(normalization_shift(0, Normalization::Normalized) == 1);
  CHECK(normalization_shift(-2, Normalization::Normalized) == 3);
  CHECK(normalization_shift(4, Normalization::Naive) == 1);
  for (int p : {5, 7, 11, 13}) {
    CHECK(block_decay(p, 0) == row_decay(p, 0) - column_growth(p, 0));
    for (int b = 1; b < 60; ++b) CHECK(block_decay(p, b) >= block_decay(p, b - 1));
  }
  CHECK(weight_deficit(4, 5) == 0);
  CHECK(weight_deficit(-2, 5) == 1);
  CHECK(weight_deficit(-13, 5) == 3);
  // Decay eventually beats any fixed precision.
  CHECK(block_decay(5, default_depth(5, 10) + 1) >= 10);
  CHECK(block_decay(5, default_depth(5, 10)) < 10);
}

TEST_CASE("matrix entries respect the decay bound") {
  for (int p : {5, 7, 11})
    for (int k : {-6, -2, 0, 2, 4, 12}) {
      const int depth = 5;
      const int m = 20;
      const auto b = katz_basis(k, p, depth, required_qprec(k, p, depth), m);
      const auto u = up_matrix(b, Normalization::Naive);
      for (int l = 0; l < b.dim(); ++l)
        for (int i = 0; i < b.dim(); ++i) {
          const int bound = row_decay(p, b.elements[l].block) - column_growth(p, b.elements[i].block) -
                            weight_deficit(k, p) + normalization_shift(k, Normalization::Naive);
          if (bound <= 0 || bound >= m) continue;
          CHECK_MESSAGE(u.entry(l, i).valuation() >= bound, "p=" << p << " k=" << k << " (" << l << "," << i << ")");
        }
    }
}

TEST_CASE("truncation error against a deeper truncation") {
  for (auto [k, p] : {std::pair{4, 5}, std::pair{0, 5}, std::pair{-2, 7}, std::pair{12, 7}}) {
    const int m = 12;
    const int shallow = 3, deep = 7;
    const auto bs = katz_basis(k, p, shallow, required_qprec(k, p, shallow), m);
    const auto bd = katz_basis(k, p, deep, required_qprec(k, p, deep), m);
    const auto cs = char_series(up_matrix(bs));
    const auto cd = char_series(up_matrix(bd));
    for (int n = 1; n <= cs.degree(); ++n) {
      const long long digits = std::min<long long>(m, truncation_digits(k, p, shallow, Normalization::Normalized, n));
      if (digits <= 0) continue;
      CHECK_MESSAGE(cs.coeffs[n].congruent(cd.coeffs[n], static_cast<int>(digits)),
                    "k=" << k << " p=" << p << " n=" << n << " digits=" << digits);
    }
    // The series produced for users carries those precisions.
    const auto attached = up_char_series(bs, up_matrix(bs), Normalization::Normalized);
    for (int n = 1; n <= attached.degree(); ++n)
      CHECK(attached.coeffs[n].precision() <=
            std::max<long long>(0, std::min<long long>(m, truncation_digits(k, p, shallow, Normalization::Normalized, n))));
  }
}

TEST_CASE("classical U_p spectra") {
  CHECK(cusp_dimension_level1(12) == 1);
  CHECK(cusp_dimension_level1(24) == 2);
  CHECK(cusp_dimension_gamma0(2, 11) == 1);
  CHECK(cusp_dimension_gamma0(2, 5) == 0);
  CHECK(cusp_dimension_gamma0(4, 5) == 1);
  CHECK(cusp_dimension_gamma0(12, 5) == 5);
  CHECK(cusp_dimension_gamma0(4, 7) == 1);

  CHECK(sorted(classical_up_spectrum(4, 5).all()) == rationals({{0, 1}, {1, 1}, {3, 1}}));
  // E_12 gives 0 and 11; Delta has v_5(4830) = 1, so 1 and 10; three newforms at 5.
  CHECK(sorted(classical_up_spectrum(12, 5).all()) ==
        rationals({{0, 1}, {1, 1}, {5, 1}, {5, 1}, {5, 1}, {10, 1}, {11, 1}}));
  const auto w2 = classical_up_spectrum(2, 5);
  CHECK(w2.eisenstein_extra == 1);
  CHECK(w2.all() == rationals({{0, 1}}));
  // X_0(11) has genus one: a weight-two newform of slope 0.
  CHECK(sorted(classical_up_spectrum(2, 11).all()) == rationals({{0, 1}, {0, 1}}));
}

TEST_CASE("overconvergent slopes") {
  const int m = 10;
  const int depth = default_depth(5, m);
  const auto r4 = slope_spectrum(4, 5, depth, m);
  CHECK(r4.polygon.flattened() == rationals({{0, 1}, {1, 1}, {3, 1}}));
  CHECK(r4.nonnegative);
  CHECK(r4.naive_consistent);
  REQUIRE(r4.classical);

  const auto r0 = slope_spectrum(0, 5, depth, m);
  // Constants have slope 1 in this normalisation.
  CHECK(r0.polygon.slopes.front().value == Rational(1));
  CHECK(r0.naive_consistent);
  CHECK_FALSE(r0.classical);

  const auto rneg = slope_spectrum(-2, 7, default_depth(7, 20), 20);
  const auto low = rneg.polygon.slopes_below(Rational(5));
  CHECK(low == rationals({{3, 1}, {4, 1}}));

  CHECK_THROWS_AS(slope_spectrum(3, 5, depth, m), InvalidArgument);
  CHECK_THROWS_AS(slope_spectrum(4, 5, depth, 0), InvalidArgument);
}

TEST_CASE("slopes are stable under deeper truncation") {
  for (auto [k, p] : {std::pair{4, 5}, std::pair{2, 7}, std::pair{-2, 5}, std::pair{12, 5}}) {
    const int m = 10;
    const int depth = default_depth(p, m);
    const auto a = slope_spectrum(k, p, depth, m);
    const auto b = slope_spectrum(k, p, depth + 2, m);
    Rational bound(m);
    if (a.polygon.complete_below) bound = std::min(bound, *a.polygon.complete_below);
    if (b.polygon.complete_below) bound = std::min(bound, *b.polygon.complete_below);
    CHECK_MESSAGE(a.polygon.slopes_below(bound) == b.polygon.slopes_below(bound), "k=" << k << " p=" << p);
  }
}

TEST_CASE("slope-zero multiplicity is the ordinary rank") {
  for (int p : {5, 7})
    for (int k = 4; k <= 16; k += 2) {
      const int m = 6;
      const auto r = slope_spectrum(k, p, default_depth(p, m), m);
      int zero = 0;
      for (const auto& s : r.polygon.slopes)
        if (s.value == Rational(0)) zero = s.multiplicity;
      CHECK_MESSAGE(zero == hida::ordinary_rank_mod_p(k, p), "k=" << k << " p=" << p);
    }
}

TEST_CASE("classicality") {
  const auto v = classicality_check(4, 5, default_depth(5, 10), 10);
  CHECK(v.kind == ClassicalityVerdict::Kind::Pass);
  CHECK(v.full_window);
  CHECK(v.overconvergent == v.classical);
  CHECK(v.overconvergent == rationals({{0, 1}, {1, 1}}));

  const auto v12 = classicality_check(12, 5, default_depth(5, 30), 30);
  CHECK(v12.kind == ClassicalityVerdict::Kind::Pass);
  CHECK(v12.overconvergent == rationals({{0, 1}, {1, 1}, {5, 1}, {5, 1}, {5, 1}}));

  CHECK(to_string(ClassicalityVerdict::Kind::Pass) == "pass");
  CHECK(to_string(ClassicalityVerdict::Kind::Indeterminate) == "indeterminate");
  CHECK_THROWS_AS(classicality_check(0, 5, 3, 10), InvalidArgument);
}
