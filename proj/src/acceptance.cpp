#include "slopekit/acceptance.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <sstream>

#include "slopekit/coleman.hpp"
#include "slopekit/duality.hpp"
#include "slopekit/eigencurve.hpp"
#include "slopekit/hida.hpp"
#include "slopekit/qexp.hpp"

namespace slopekit::acceptance {

namespace {

// Collects pass/fail for one criterion; keeps the first mismatch verbatim.
class Tally {
 public:
  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (!ok && first_.empty()) first_ = what;
    if (!ok) ++failures_;
  }
  void note(const std::string& s) { notes_ += (notes_.empty() ? "" : "; ") + s; }
  bool passed() const { return failures_ == 0 && checks_ > 0; }
  std::string detail() const {
    std::string out = std::to_string(checks_) + " checks";
    if (!notes_.empty()) out += "; " + notes_;
    if (failures_ > 0) out += "; " + std::to_string(failures_) + " failed, first: " + first_;
    return out;
  }

 private:
  int checks_ = 0;
  int failures_ = 0;
  std::string first_;
  std::string notes_;
};

std::string str(const std::vector<Rational>& xs) {
  std::string out = "{";
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + to_string(xs[i]);
  return out + "}";
}

std::string at(int k, int p) { return "(k=" + std::to_string(k) + ",p=" + std::to_string(p) + ")"; }

BigInt pow_int(long long b, int e) {
  BigInt r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

int vp(BigInt x, int p) {
  if (x == 0) return 1 << 20;
  if (x < 0) x = -x;
  int v = 0;
  while (x % p == 0) x /= p, ++v;
  return v;
}

// ---------------------------------------------------------------------------
// 1. Projector algebra

PadicMatrix random_matrix(const Modulus& mod, std::size_t n, std::mt19937_64& rng) {
  PadicMatrix a(mod, n, n);
  const auto pm = static_cast<std::uint64_t>(mod.value());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = rng() % pm;
  // Every third matrix gets rows divisible by p so the kernel part is large.
  if (rng() % 3 == 0)
    for (std::size_t i = 0; i < n; ++i)
      if (rng() % 2 == 0)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = mod.mul(a(i, j), static_cast<Residue>(mod.p()));
  return a;
}

// Number of nonzero eigenvalues mod p, counted with multiplicity: the degree
// of det(1 - xT) mod p.
std::size_t unit_eigenvalue_count(const PadicMatrix& t) {
  const auto s = char_series(t);
  std::size_t deg = 0;
  for (std::size_t j = 0; j < s.coeffs.size(); ++j)
    if (s.coeffs[j].residue() % static_cast<Residue>(t.modulus().p()) != 0) deg = j;
  return deg;
}

CriterionResult projector_algebra(std::uint64_t seed) {
  Tally t;
  std::mt19937_64 rng(seed);
  for (const auto& mod : {Modulus(5, 4), Modulus(7, 3)}) {
    for (int trial = 0; trial < 1000; ++trial) {
      const std::size_t n = 1 + rng() % 8;
      const auto a = random_matrix(mod, n, rng);
      const auto pr = ordinary_projector(a);
      const auto& e = pr.idempotent;
      const auto id = PadicMatrix::identity(mod, n);
      const auto kernel = id - e;
      const std::string tag = "Z/" + std::to_string(mod.p()) + "^" + std::to_string(mod.m()) + " trial " +
                              std::to_string(trial);
      t.expect(e * e == e, tag + ": e^2 != e");
      t.expect(e * a == a * e, tag + ": eT != Te");
      const Residue det = determinant(a * e + kernel);
      t.expect(det % static_cast<Residue>(mod.p()) != 0, tag + ": T not a unit on the image of e");
      t.expect((a * kernel).pow(n).reduced(1).is_zero(), tag + ": T not nilpotent mod p on the kernel of e");
      t.expect(pr.rank == rank_mod_p(e), tag + ": reported rank differs from rank of e");
      t.expect(pr.rank == unit_eigenvalue_count(a), tag + ": rank e differs from the unit eigenvalue count");
    }
  }
  t.note("1000 matrices each over Z/5^4 and Z/7^3, sizes 1..8");
  return {1, "projector algebra", t.passed(), t.detail()};
}

// ---------------------------------------------------------------------------
// 2. Hecke normalization

std::vector<BigInt> e4_oracle(int qprec) {
  std::vector<BigInt> c(static_cast<std::size_t>(qprec));
  c[0] = 1;
  for (int n = 1; n < qprec; ++n) {
    BigInt s = 0;
    for (int d = 1; d <= n; ++d)
      if (n % d == 0) s += pow_int(d, 3);
    c[n] = 240 * s;
  }
  return c;
}

// q * prod (1 - q^n)^24, multiplied out factor by factor.
std::vector<BigInt> delta_oracle(int qprec) {
  std::vector<BigInt> c(static_cast<std::size_t>(qprec), 0);
  if (qprec > 1) c[1] = 1;
  for (int n = 1; n < qprec; ++n)
    for (int r = 0; r < 24; ++r)
      for (int i = qprec - 1; i >= n; --i) c[i] -= c[i - n];
  return c;
}

CriterionResult hecke_normalization(std::uint64_t seed) {
  Tally t;
  const int out = 50;
  const auto z = CoefficientRing::integers();

  const auto e4 = qexp::eisenstein(4, 5 * out);
  const auto e4_ref = e4_oracle(5 * out);
  t.expect(e4.coeffs() == e4_ref, "E4 differs from the divisor-sum oracle");
  const auto t5 = qexp::hecke_tp(e4, 4, 5);
  t.expect(t5.qprec() == out, "T5 E4 has q-precision " + std::to_string(t5.qprec()));
  t.expect(t5 == e4.truncated(out).scaled(126), "T5 E4 != 126 E4");
  for (int n = 0; n < out; ++n) {
    const BigInt lhs = e4_ref[5 * n] + (n % 5 == 0 ? 125 * e4_ref[n / 5] : BigInt(0));
    t.expect(lhs == 126 * e4_ref[n], "divisor-sum oracle: a(5n) + 125 a(n/5) != 126 a(n) at n = " +
                                         std::to_string(n));
  }

  const auto delta = qexp::delta(2 * out);
  const auto delta_ref = delta_oracle(2 * out);
  t.expect(delta.coeffs() == delta_ref, "Delta differs from the product-expansion oracle");
  const auto t2 = qexp::hecke_tp(delta, 12, 2);
  t.expect(t2 == delta.truncated(out).scaled(-24), "T2 Delta != -24 Delta");
  for (int n = 0; n < out; ++n) {
    const BigInt lhs = delta_ref[2 * n] + (n % 2 == 0 ? 2048 * delta_ref[n / 2] : BigInt(0));
    t.expect(lhs == -24 * delta_ref[n], "product oracle: tau(2n) + 2^11 tau(n/2) != -24 tau(n) at n = " +
                                            std::to_string(n));
  }

  // At k = 1 the two normalizations coincide: p^{1-k} U + F and U + p^{k-1} F.
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  for (int trial = 0; trial < 100; ++trial) {
    const int p = qexp::kSupportedPrimes[rng() % 4];
    const int qprec = p * (1 + static_cast<int>(rng() % 30));
    std::vector<BigInt> c(static_cast<std::size_t>(qprec));
    for (auto& x : c) x = static_cast<long long>(rng() % 2000001) - 1000000;
    const QSeries f(z, c);
    const auto hi = qexp::hecke_tp(f, 1, p);
    const auto naive = qexp::up_naive(f, p);
    std::vector<BigInt> u(naive.coeffs());
    for (auto& x : u) x /= p;  // p^{1-k} * p^{-1} * up_naive at k = 1
    const auto lo = QSeries(z, u) + qexp::frobenius_f(f, 1, p).truncated(hi.qprec());
    t.expect(hi == lo, "k = 1 branches differ on random series " + std::to_string(trial));
    std::vector<BigInt> direct(static_cast<std::size_t>(qprec / p));
    for (int n = 0; n < qprec / p; ++n) direct[n] = c[n * p] + (n % p == 0 ? c[n / p] : BigInt(0));
    t.expect(hi.coeffs() == direct, "T_p at k = 1 differs from a(np) + a(n/p) on series " + std::to_string(trial));
  }
  t.note("q-precision 50; 100 random integer series at k = 1");
  return {2, "Hecke normalization", t.passed(), t.detail()};
}

// ---------------------------------------------------------------------------
// 3. Mod-p congruences

CriterionResult mod_p_congruences(std::uint64_t) {
  Tally t;
  for (int p : {5, 7}) {
    for (int k = 2; k <= 40; k += 2) {
      const int dim = qexp::basis_dimension(k);
      const int qprec = p * (dim + 8);
      const auto basis = qexp::miller_basis(k, qprec);
      const auto tp = qexp::operator_matrix(basis, [&](const QSeries& f) { return qexp::hecke_tp(f, k, p); },
                                            Modulus(p, 4));
      const auto basis_p = qexp::miller_basis(k, qprec, CoefficientRing::mod_pm(p, 1));
      const auto up = qexp::operator_matrix(basis_p, [&](const QSeries& f) { return qexp::up(f, k, p); },
                                            Modulus(p, 1));
      t.expect(tp.closed, at(k, p) + ": T_p does not preserve M_k");
      t.expect(up.closed, at(k, p) + ": U_p does not preserve M_k mod p");
      t.expect(tp.matrix.reduced(1) == up.matrix, at(k, p) + ": T_p and U_p matrices differ mod p");
    }
    for (int k = 4; k <= 20; ++k) {
      if (k % 2 != 0) continue;
      const auto basis = qexp::miller_basis(k, p * 40);
      const BigInt pk = pow_int(p, k - 1);
      for (int j = 0; j < basis.dim(); ++j) {
        const auto& f = basis.forms[j];
        const auto tp = qexp::hecke_tp(f, k, p);
        const auto sum = qexp::up(f, k, p) + qexp::frobenius_f(f, k, p).truncated(tp.qprec()).scaled(pk);
        t.expect(tp == sum, at(k, p) + ": T_p != U_p + p^{k-1} F on basis form " + std::to_string(j));
        std::vector<BigInt> direct(static_cast<std::size_t>(tp.qprec()));
        for (int n = 0; n < tp.qprec(); ++n) direct[n] = f[n * p] + (n % p == 0 ? pk * f[n / p] : BigInt(0));
        t.expect(tp.coeffs() == direct, at(k, p) + ": T_p differs from the coefficient formula");
      }
    }
  }
  t.note("even k in [2,40] mod p, k in [4,20] over Z, p in {5,7}");
  return {3, "mod-p congruences", t.passed(), t.detail()};
}

// ---------------------------------------------------------------------------
// 4. Hida control at H^0

CriterionResult hida_control(std::uint64_t) {
  Tally t;
  for (int p : {5, 7}) {
    for (int k = 4; k <= 16; k += 2) {
      const int r0 = hida::ordinary_rank_mod_p(k, p);
      for (int n = 1; n <= 3; ++n) {
        const int kn = k + n * (p - 1);
        const int rn = hida::ordinary_rank_mod_p(kn, p);
        t.expect(rn == r0, at(k, p) + ": ordinary rank " + std::to_string(r0) + " but " + std::to_string(rn) +
                               " at k = " + std::to_string(kn));
        const auto c = hida::control_check_h0(k, p, n);
        t.expect(c.contained, at(k, p) + ": e M_" + std::to_string(kn) + " mod p not inside M_" + std::to_string(k));
        t.expect(c.passed(), at(k, p) + ": control check failed at n = " + std::to_string(n));
      }
    }
  }
  // E_4 is the Hasse lift at p = 5; its powers E_8 and E_12 are also 1 mod 5.
  for (int k : {4, 8, 12}) {
    const auto e = qexp::eisenstein(k, 60, CoefficientRing::mod_pm(5, 1));
    t.expect(e == QSeries::one(CoefficientRing::mod_pm(5, 1), 60), "E_" + std::to_string(k) + " is not 1 mod 5");
  }
  for (int n : {1, 2}) {
    const auto c = hida::control_check_h0(4, 5, n);
    t.expect(c.contained && c.passed(),
             "e(U_5) M_" + std::to_string(c.target_weight) + "(F_5) not inside M_4(F_5)");
  }
  t.note("even k in [4,16], n <= 3, p in {5,7}; chains 8 -> 4 and 12 -> 4 at p = 5");
  return {4, "Hida control", t.passed(), t.detail()};
}

// ---------------------------------------------------------------------------
// 5. Family interpolation

CriterionResult family_interpolation(std::uint64_t) {
  Tally t;
  const BigInt p5 = 125;
  auto a2 = [](int k) { return 1 + pow_int(2, k - 1); };

  {
    const std::vector<int> ws{4, 8, 12, 16};
    const auto fam = hida::fit_family(5, 0, ws, {2}, 3);
    t.expect(fam.rank >= 1, "family rank is " + std::to_string(fam.rank));
    for (int k : ws) {
      const int r = hida::ordinary_rank_mod_p(k, 5);
      t.expect(r == fam.rank, "rank at k = " + std::to_string(k) + " is " + std::to_string(r));
    }
    t.expect(fam.passed(), "family fit on {4,8,12,16} did not verify");
    const hida::FamilySystem* eis = nullptr;
    for (const auto& s : fam.systems) {
      bool match = true;
      for (std::size_t i = 0; i < ws.size(); ++i)
        match = match && s.values.at(2)[i].lift() == BigInt(a2(ws[i]) % p5);
      if (match) eis = &s;
    }
    t.expect(eis != nullptr, "no system on {4,8,12,16} has a_2(k) = 1 + 2^{k-1} mod 5^3");
    if (eis)
      for (std::size_t i = 0; i < ws.size(); ++i)
        t.expect(eis->values.at(5)[i].lift() == 1, "a_5 != 1 at k = " + std::to_string(ws[i]));
  }

  // Weights 4, 24, 104 differ by 4*5 and 4*5^2: congruences to 2 and 3 digits.
  const std::vector<int> ws{4, 24, 104};
  const auto fam = hida::fit_family(5, 0, ws, {2}, 3);
  t.expect(fam.passed(), "family fit on {4,24,104} did not verify");
  int checked = 0;
  for (const auto& c : fam.congruence_checks) {
    if (c.ell != 2) continue;
    const int expect = std::min(3, 1 + vp(BigInt(c.k1 - c.k2), 5));
    t.expect(c.digits == expect, "congruence digits " + std::to_string(c.digits) + " for weights " +
                                     std::to_string(c.k1) + ", " + std::to_string(c.k2));
    t.expect(c.holds, "a_2 congruence fails for weights " + std::to_string(c.k1) + ", " + std::to_string(c.k2));
    ++checked;
  }
  t.expect(checked == 3, "expected 3 a_2 congruence checks, got " + std::to_string(checked));
  for (std::size_t i = 0; i < ws.size(); ++i)
    for (std::size_t j = i + 1; j < ws.size(); ++j) {
      const int d = std::min(3, 1 + vp(BigInt(ws[j] - ws[i]), 5));
      t.expect(vp(a2(ws[j]) - a2(ws[i]), 5) >= d, "oracle a_2 congruence fails for weights " +
                                                       std::to_string(ws[i]) + ", " + std::to_string(ws[j]));
    }
  t.note("p = 5, component 0, m = 3");
  return {5, "family interpolation", t.passed(), t.detail()};
}

// ---------------------------------------------------------------------------
// 6. Slope floors

std::vector<Rational> certified_below(const NewtonPolygon& poly, const Rational& bound) {
  return poly.slopes_below(bound);
}

CriterionResult slope_floors(std::uint64_t) {
  Tally t;
  const int m = 10;
  for (auto [k, p] : std::vector<std::pair<int, int>>{{2, 5}, {4, 5}, {12, 5}, {4, 7}}) {
    const auto r = coleman::slope_spectrum(k, p, coleman::default_depth(p, m), m);
    t.expect(r.nonnegative, at(k, p) + ": report flags a negative slope");
    t.expect(r.naive_consistent, at(k, p) + ": report flags naive/normalized mismatch");
    for (const auto& s : r.polygon.slopes)
      t.expect(s.value >= Rational(0), at(k, p) + ": certified slope " + to_string(s.value) + " < 0");
    t.expect(!r.polygon.slopes.empty(), at(k, p) + ": no certified slopes");
    if (!r.polygon.complete_below || !r.naive_polygon.complete_below) {
      t.expect(false, at(k, p) + ": polygon has no certified range");
      continue;
    }
    const Rational bound = std::min(*r.polygon.complete_below, *r.naive_polygon.complete_below - Rational(1));
    auto norm = certified_below(r.polygon, bound);
    auto naive = certified_below(r.naive_polygon, bound + Rational(1));
    for (auto& s : norm) s += 1;
    t.expect(norm == naive, at(k, p) + ": naive " + str(naive) + " != normalized + 1 " + str(norm));
    for (const auto& s : naive) t.expect(s >= Rational(1), at(k, p) + ": naive slope below 1");
  }
  t.note("m = 10 at default depth");
  return {6, "slope floors", t.passed(), t.detail()};
}

// ---------------------------------------------------------------------------
// 7. Classicality

// Level-p cusp dimension from the genus formula for Gamma_0(p), even k >= 4.
int cusp_dim_gamma0_oracle(int k, int p) {
  auto legendre = [p](int a) {
    a = ((a % p) + p) % p;
    for (int x = 1; x < p; ++x)
      if (x * x % p == a) return 1;
    return -1;
  };
  const int mu = p + 1;
  const int nu2 = 1 + legendre(-1), nu3 = 1 + legendre(-3), cusps = 2;
  // 12 g = 12 + mu - 3 nu2 - 4 nu3 - 6 cusps
  const int g12 = 12 + mu - 3 * nu2 - 4 * nu3 - 6 * cusps;
  return (k - 1) * (g12 - 12) / 12 + (k / 2 - 1) * cusps + nu2 * (k / 4) + nu3 * (k / 3);
}

// Old pair slopes from x^2 - a x + p^{k-1}.
std::vector<Rational> old_pair(const BigInt& a, int k, int p) {
  const int v = vp(a, p);
  if (2 * v < k - 1) return {Rational(v), Rational(k - 1 - v)};
  return {Rational(k - 1, 2), Rational(k - 1, 2)};
}

std::vector<Rational> classical_oracle(int k, int p) {
  std::vector<Rational> out;
  auto add = [&](const std::vector<Rational>& xs) { out.insert(out.end(), xs.begin(), xs.end()); };
  add(old_pair(1 + pow_int(p, k - 1), k, p));  // Eisenstein a_p = sigma_{k-1}(p)
  if (k == 12) add(old_pair(BigInt(delta_oracle(p + 1)[p]), k, p));
  const int level1_cusp = k == 12 ? 1 : 0;  // only weights used here
  const int fresh = cusp_dim_gamma0_oracle(k, p) - 2 * level1_cusp;
  for (int i = 0; i < fresh; ++i) out.push_back(Rational(k - 2, 2));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Rational> below(std::vector<Rational> xs, const Rational& b) {
  xs.erase(std::remove_if(xs.begin(), xs.end(), [&](const Rational& x) { return x >= b; }), xs.end());
  return xs;
}

CriterionResult classicality(std::uint64_t) {
  Tally t;
  t.expect(classical_oracle(4, 5) == std::vector<Rational>{Rational(0), Rational(1), Rational(3)},
           "oracle at (4,5) is " + str(classical_oracle(4, 5)));
  for (auto [k, p, m] : std::vector<std::tuple<int, int, int>>{{4, 5, 10}, {12, 5, 10}, {12, 5, 54}}) {
    const auto v = coleman::classicality_check(k, p, coleman::default_depth(p, m), m);
    const Rational window = std::min(v.window, Rational(m - 2));
    const std::string tag = at(k, p) + " m=" + std::to_string(m);
    t.expect(window > Rational(0), tag + ": nothing certified");
    auto oc = below(v.overconvergent, window);
    auto cl = below(classical_oracle(k, p), std::min(window, Rational(k - 1)));
    std::sort(oc.begin(), oc.end());
    t.expect(oc == cl, tag + ": overconvergent " + str(oc) + " vs classical oracle " + str(cl) + " below " +
                           to_string(window));
    t.expect(v.kind == coleman::ClassicalityVerdict::Kind::Pass, tag + ": verdict " + coleman::to_string(v.kind));
    t.note(tag + " window " + to_string(window) + " slopes " + str(oc));
  }
  return {7, "classicality", t.passed(), t.detail()};
}

// ---------------------------------------------------------------------------
// 8. Truncation stability

CriterionResult truncation_stability(std::uint64_t) {
  Tally t;
  const int m = 10;
  for (auto [k, p] : std::vector<std::pair<int, int>>{{2, 5}, {4, 5}, {12, 5}, {4, 7}, {0, 5}, {6, 7}}) {
    const int i1 = coleman::default_depth(p, m);
    const int q1 = coleman::required_qprec(k, p, i1);
    const int q2 = std::max(2 * q1, coleman::required_qprec(k, p, i1 + 2));
    const auto a = coleman::slope_spectrum(k, p, i1, m, q1);
    const auto b = coleman::slope_spectrum(k, p, i1 + 2, m, q2);
    Rational bound = std::min(Rational(m - 2), Rational(std::max(k, 1)));
    if (a.polygon.complete_below) bound = std::min(bound, *a.polygon.complete_below);
    if (b.polygon.complete_below) bound = std::min(bound, *b.polygon.complete_below);
    const auto sa = a.polygon.slopes_below(bound), sb = b.polygon.slopes_below(bound);
    t.expect(sa == sb, at(k, p) + ": " + str(sa) + " at I=" + std::to_string(i1) + " vs " + str(sb) + " at I=" +
                           std::to_string(i1 + 2) + " below " + to_string(bound));
    t.expect(bound > Rational(0), at(k, p) + ": empty comparison range");
  }
  t.note("m = 10; (I, Q) vs (I+2, 2Q)");
  return {8, "truncation stability", t.passed(), t.detail()};
}

// ---------------------------------------------------------------------------
// 9. Eigencurve disc

CriterionResult eigencurve_disc(std::uint64_t) {
  Tally t;
  eigencurve::WeightDisc disc{5, 0, 12, {4, 8, 12, 16, 20}, -1, 10};
  const int depth = coleman::default_depth(disc.p, disc.m);
  int min_digits = 1 << 20;
  for (int k : disc.samples) {
    const auto h = eigencurve::held_out_check(disc, depth, k);
    t.expect(h.compared_coefficients > 0, "k = " + std::to_string(k) + ": no coefficient had a common digit");
    t.expect(h.matches, "k = " + std::to_string(k) + ": held-out specialization differs from direct computation");
    min_digits = std::min(min_digits, h.min_digits);
  }
  const auto s = eigencurve::two_var_charseries(disc, depth);
  const auto piece = eigencurve::local_piece_report(s, Rational(0));
  t.expect(piece.constant, "slope-0 factor degree varies across the disc");
  for (const auto& [k, d] : piece.degree_by_weight)
    t.expect(d == hida::ordinary_rank_mod_p(k, 5), "slope-0 degree at k = " + std::to_string(k) +
                                                       " differs from the ordinary rank");
  t.note("held out each of {4,...,20}; min digits " + std::to_string(min_digits) + "; slope-0 degree " +
         (piece.degree ? std::to_string(*piece.degree) : std::string("-")));
  return {9, "eigencurve disc", t.passed(), t.detail()};
}

// ---------------------------------------------------------------------------
// 10. Duality

CriterionResult duality_checks(std::uint64_t seed) {
  Tally t;
  // Transpose and rank duality across a range of weights, both signs.
  for (int p : {5, 7}) {
    for (int k = -8; k <= 16; k += 2) {
      const int m = 8, depth = 3;
      const auto basis = coleman::katz_basis(k, p, depth, coleman::required_qprec(k, p, depth), m);
      const auto u = coleman::up_matrix(basis);
      const auto fam = duality::dual_module(u);
      const auto cu = char_series(u).coeffs, ct = char_series(u.transpose()).coeffs,
                 cf = char_series(fam.operator_on_dual).coeffs;
      t.expect(cu == ct, at(k, p) + ": char series of U and U^T differ");
      t.expect(cu == cf, at(k, p) + ": char series of U and F differ");
      t.expect(fam.source_rank == fam.dual_rank, at(k, p) + ": rank e(U) != rank e(F)");
      t.expect(fam.source_rank == ordinary_projector(u.transpose()).rank, at(k, p) + ": rank e(U) != rank e(U^T)");
    }
  }

  // <U f, g> = <f, F g> with F = G^{-1} U^T G, checked directly.
  std::mt19937_64 rng(seed ^ 0x5851f42d4c957f2dULL);
  for (int trial = 0; trial < 100; ++trial) {
    const Modulus mod = trial % 2 == 0 ? Modulus(5, 4) : Modulus(7, 3);
    const std::size_t n = 1 + rng() % 8;
    const auto u = random_matrix(mod, n, rng);
    const auto gram = duality::random_unimodular(mod, n, rng());
    const auto fam = duality::dual_module(u, gram);
    PadicMatrix f(mod, n, 1), g(mod, n, 1);
    for (std::size_t i = 0; i < n; ++i) {
      f(i, 0) = rng() % static_cast<std::uint64_t>(mod.value());
      g(i, 0) = rng() % static_cast<std::uint64_t>(mod.value());
    }
    const auto lhs = (u * f).transpose() * gram * g;
    const auto rhs = f.transpose() * gram * (fam.operator_on_dual * g);
    t.expect(lhs == rhs, "adjunction fails on tuple " + std::to_string(trial));
    t.expect(duality::adjunction_check(f, g, u, gram, fam.operator_on_dual),
             "library adjunction check rejects tuple " + std::to_string(trial));
    t.expect(gram * fam.operator_on_dual == u.transpose() * gram, "G F != U^T G on tuple " + std::to_string(trial));
  }

  for (auto [k, p] : std::vector<std::pair<int, int>>{{2, 5}, {4, 5}, {4, 7}}) {
    const int m = 20;
    const auto r = duality::charseries_duality_check(k, p, coleman::default_depth(p, m), m, seed);
    t.expect(r.structural, at(k, p) + ": structural duality fails");
    t.expect(r.rank_duality, at(k, p) + ": rank duality fails");
    t.expect(r.theta.holds(), at(k, p) + ": theta shift by k-1 fails, missing " + str(r.theta.missing) +
                                  " of probed " + str(r.theta.probed));
    t.expect(!r.negative_control.holds(), at(k, p) + ": negative control (shift k) did not fail");
    t.expect(r.verdict() == duality::DualityReport::Verdict::Pass,
             at(k, p) + ": verdict " + duality::to_string(r.verdict()));
    t.note(at(k, p) + " probed " + str(r.theta.probed));
  }
  return {10, "duality", t.passed(), t.detail()};
}

using Runner = std::function<CriterionResult(std::uint64_t)>;

const std::vector<std::pair<std::string, Runner>>& runners() {
  static const std::vector<std::pair<std::string, Runner>> all{
      {"projector algebra", projector_algebra},     {"Hecke normalization", hecke_normalization},
      {"mod-p congruences", mod_p_congruences},     {"Hida control", hida_control},
      {"family interpolation", family_interpolation}, {"slope floors", slope_floors},
      {"classicality", classicality},               {"truncation stability", truncation_stability},
      {"eigencurve disc", eigencurve_disc},         {"duality", duality_checks}};
  return all;
}

}  // namespace

CriterionResult run_criterion(int id, std::uint64_t seed) {
  if (id < 1 || id > kCriteria) return {id, "unknown", false, "criteria are numbered 1.." + std::to_string(kCriteria)};
  const auto& [name, run] = runners()[static_cast<std::size_t>(id - 1)];
  try {
    auto r = run(seed);
    r.id = id;
    return r;
  } catch (const std::exception& e) {
    return {id, name, false, std::string("exception: ") + e.what()};
  }
}

std::vector<CriterionResult> run_all(std::uint64_t seed) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= kCriteria; ++id) out.push_back(run_criterion(id, seed));
  return out;
}

}  // namespace slopekit::acceptance
