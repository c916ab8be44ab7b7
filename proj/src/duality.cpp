#include "slopekit/duality.hpp"

#include <map>
#include <random>

#include "slopekit/error.hpp"

namespace slopekit::duality {

namespace {

bool same_series(const CharSeries& a, const CharSeries& b) {
  if (a.coeffs.size() != b.coeffs.size()) return false;
  for (std::size_t n = 0; n < a.coeffs.size(); ++n)
    if (a.coeffs[n] != b.coeffs[n]) return false;
  return true;
}

PadicMatrix katz_operator(int k, int p, int depth, int m) {
  const auto basis = coleman::katz_basis(k, p, depth, coleman::required_qprec(k, p, depth), m);
  return coleman::up_matrix(basis, coleman::Normalization::Normalized);
}

// Structural and rank checks for one operator; returns false on any mismatch.
bool structural_ok(const PadicMatrix& u, const DualFamily& dual) {
  if (u.rows() == 0) return true;
  const auto s = char_series(u);
  return same_series(s, char_series(u.transpose())) && same_series(s, char_series(dual.operator_on_dual));
}

}  // namespace

DualFamily dual_module(const PadicMatrix& up) {
  return dual_module(up, PadicMatrix::identity(up.modulus(), up.rows()));
}

DualFamily dual_module(const PadicMatrix& up, const PadicMatrix& gram) {
  if (!up.square()) throw InvalidArgument("dual_module: operator matrix must be square");
  if (!gram.square() || gram.rows() != up.rows())
    throw InvalidArgument("dual_module: gram must be square of size " + std::to_string(up.rows()));
  if (gram.modulus() != up.modulus()) throw InvalidArgument("dual_module: gram and operator moduli differ");
  DualFamily d{up, gram, inverse(gram) * up.transpose() * gram, 0, 0};
  if (up.rows() > 0) {
    d.source_rank = ordinary_projector(up).rank;
    d.dual_rank = ordinary_projector(d.operator_on_dual).rank;
  }
  return d;
}

bool adjunction_check(const PadicMatrix& f, const PadicMatrix& g, const PadicMatrix& up, const PadicMatrix& gram,
                      const PadicMatrix& f_dual) {
  const std::size_t n = up.rows();
  if (!up.square() || !gram.square() || !f_dual.square() || gram.rows() != n || f_dual.rows() != n ||
      f.rows() != n || g.rows() != n || f.cols() != 1 || g.cols() != 1)
    throw InvalidArgument("adjunction_check: size mismatch");
  return (up * f).transpose() * gram * g == f.transpose() * gram * (f_dual * g);
}

PadicMatrix random_unimodular(const Modulus& mod, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  PadicMatrix a(mod, n, n);
  for (;;) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) a(i, j) = static_cast<Residue>(rng()) % mod.value();
    if (determinant(a) % static_cast<Residue>(mod.p()) != 0) return a;
  }
}

ThetaProbe theta_probe(const coleman::SlopeReport& dual_weight, const coleman::SlopeReport& weight, int shift) {
  ThetaProbe t;
  t.shift = shift;
  std::map<Rational, int> dual_count, weight_count;
  for (const auto& s : dual_weight.polygon.slopes) dual_count[s.value] += s.multiplicity;
  for (const auto& s : weight.polygon.slopes) weight_count[s.value] += s.multiplicity;
  // theta^{k-1} kills the constants of weight 0 (slope 1 here) and nothing else.
  if (dual_weight.k == 0) {
    auto it = dual_count.find(Rational(coleman::normalization_shift(0, coleman::Normalization::Normalized)));
    if (it != dual_count.end() && it->second > 0) {
      --it->second;
      t.theta_kernel = 1;
    }
  }
  // theta^{k-1} shifts the slope of the classical operator; in weight 2-k the
  // normalised operator is p^{k-1} times that one.
  const Rational normalisation(coleman::normalization_shift(dual_weight.k, coleman::Normalization::Normalized));
  for (const auto& [s, count] : dual_count) {
    if (count == 0) continue;
    const Rational target = s - normalisation + Rational(shift);
    if (weight.polygon.complete_below && target >= *weight.polygon.complete_below) continue;
    const auto it = weight_count.find(target);
    const int have = it == weight_count.end() ? 0 : it->second;
    for (int i = 0; i < count; ++i) {
      t.probed.push_back(s);
      (i < have ? t.found : t.missing).push_back(s);
    }
  }
  return t;
}

DualityReport::Verdict DualityReport::verdict() const {
  if (!structural || !rank_duality || !theta.missing.empty()) return Verdict::Fail;
  if (theta.probed.empty()) return Verdict::Indeterminate;
  // A control that cannot fail proves nothing about the shift.
  if (negative_control.missing.empty()) return Verdict::Indeterminate;
  return Verdict::Pass;
}

std::string to_string(DualityReport::Verdict v) {
  switch (v) {
    case DualityReport::Verdict::Pass: return "pass";
    case DualityReport::Verdict::Fail: return "fail";
    case DualityReport::Verdict::Indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

DualityReport charseries_duality_check(int k, int p, int depth, int m, std::uint64_t seed) {
  if (k < 2) throw InvalidArgument("charseries_duality_check: needs k >= 2");
  DualityReport r;
  r.k = k;
  r.p = p;
  r.depth = depth;
  r.m = m;
  r.weight_k = coleman::slope_spectrum(k, p, depth, m);
  r.weight_dual = coleman::slope_spectrum(2 - k, p, depth, m);

  r.structural = true;
  r.rank_duality = true;
  std::uint64_t s = seed;
  for (int w : {k, 2 - k}) {
    const auto u = katz_operator(w, p, depth, m);
    const auto dual = dual_module(u, random_unimodular(u.modulus(), u.rows(), s++));
    r.structural = r.structural && structural_ok(u, dual);
    r.rank_duality = r.rank_duality && dual.source_rank == dual.dual_rank;
    if (w == k) {
      r.ordinary_rank = dual.source_rank;
      r.dual_ordinary_rank = dual.dual_rank;
    }
  }
  r.theta = theta_probe(r.weight_dual, r.weight_k, k - 1);
  r.negative_control = theta_probe(r.weight_dual, r.weight_k, k);
  return r;
}

}  // namespace slopekit::duality
