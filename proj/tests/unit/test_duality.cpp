#include <random>

#include "doctest.h"
#include "slopekit/duality.hpp"
#include "slopekit/error.hpp"

using namespace slopekit;
using namespace slopekit::duality;

namespace {

PadicMatrix random_matrix(const Modulus& mod, std::size_t r, std::size_t c, std::mt19937_64& rng) {
  PadicMatrix a(mod, r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) a(i, j) = static_cast<Residue>(rng()) % mod.value();
  return a;
}

}  // namespace

TEST_CASE("dual of a rank-one module") {
  const Modulus mod(5, 6);
  PadicMatrix u(mod, 1, 1);
  u(0, 0) = 126;
  const auto d = dual_module(u);
  CHECK(d.operator_on_dual(0, 0) == 126);
  CHECK(d.source_rank == 1);
  CHECK(d.dual_rank == 1);
}

TEST_CASE("dual operator has the same spectrum and ordinary rank") {
  std::mt19937_64 rng(7);
  for (auto [p, m] : {std::pair{5, 4}, std::pair{7, 3}})
    for (int trial = 0; trial < 50; ++trial) {
      const Modulus mod(p, m);
      const std::size_t n = 1 + rng() % 6;
      const auto u = random_matrix(mod, n, n, rng);
      const auto gram = random_unimodular(mod, n, rng());
      const auto d = dual_module(u, gram);
      CHECK(char_series(d.operator_on_dual).coeffs == char_series(u).coeffs);
      CHECK(char_series(u.transpose()).coeffs == char_series(u).coeffs);
      CHECK(d.source_rank == d.dual_rank);
      // Projector of the transpose is the transpose of the projector.
      CHECK(ordinary_projector(u.transpose()).idempotent == ordinary_projector(u).idempotent.transpose());
    }
}

TEST_CASE("adjunction") {
  std::mt19937_64 rng(11);
  const Modulus mod(5, 4);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng() % 5;
    const auto u = random_matrix(mod, n, n, rng);
    const auto f = random_matrix(mod, n, 1, rng);
    const auto g = random_matrix(mod, n, 1, rng);
    // Identity gram: F = U^T.
    CHECK(adjunction_check(f, g, u, PadicMatrix::identity(mod, n), u.transpose()));
    const auto gram = random_unimodular(mod, n, rng());
    // Oracle for F: the defining identity gram F = U^T gram.
    const auto d = dual_module(u, gram);
    CHECK(gram * d.operator_on_dual == u.transpose() * gram);
    CHECK(adjunction_check(f, g, u, gram, d.operator_on_dual));
  }
  // A perturbed F is caught once f and g see the perturbation.
  const auto u = PadicMatrix::identity(mod, 2);
  auto bad = u;
  bad(0, 1) = 1;
  PadicMatrix f(mod, 2, 1), g(mod, 2, 1);
  f(0, 0) = 1;
  g(1, 0) = 1;
  CHECK_FALSE(adjunction_check(f, g, u, PadicMatrix::identity(mod, 2), bad));
  CHECK_THROWS_AS(adjunction_check(f, g, u, PadicMatrix::identity(mod, 3), u), InvalidArgument);
  CHECK_THROWS_AS(dual_module(u, PadicMatrix::identity(mod, 3)), InvalidArgument);
}

TEST_CASE("random unimodular matrices are deterministic") {
  const Modulus mod(7, 3);
  CHECK(random_unimodular(mod, 4, 99) == random_unimodular(mod, 4, 99));
  CHECK(determinant(random_unimodular(mod, 4, 99)) % 7 != 0);
}

TEST_CASE("theta probe at configured weights") {
  struct Case {
    int k, p, m;
  };
  for (const auto c : {Case{2, 5, 20}, Case{4, 5, 20}, Case{4, 7, 20}, Case{2, 7, 20}}) {
    const auto r = charseries_duality_check(c.k, c.p, coleman::default_depth(c.p, c.m), c.m);
    CHECK(r.structural);
    CHECK(r.rank_duality);
    CHECK_MESSAGE(r.theta.holds(), "k=" << c.k << " p=" << c.p);
    CHECK_FALSE(r.negative_control.missing.empty());
    CHECK(r.verdict() == DualityReport::Verdict::Pass);
    CHECK(r.theta.theta_kernel == (c.k == 2 ? 1 : 0));
  }
  // Weight -2 at p = 5 has classical slope 0 (slope 3 normalised), carried to
  // slope 3 of weight 4: the ordinary E_4 class is not its image.
  const auto r = charseries_duality_check(4, 5, coleman::default_depth(5, 10), 10);
  CHECK(r.theta.found == std::vector<Rational>{Rational(3)});
  CHECK(to_string(r.verdict()) == "pass");
  CHECK_THROWS_AS(charseries_duality_check(1, 5, 3, 10), InvalidArgument);
}

TEST_CASE("theta probe at weight six") {
  for (int p : {5, 7}) {
    const auto r = charseries_duality_check(6, p, coleman::default_depth(p, 30), 30);
    CHECK(r.structural);
    CHECK(r.rank_duality);
    CHECK_MESSAGE(r.theta.holds(), "p=" << p);
  }
}
