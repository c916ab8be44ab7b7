#include "slopekit/coleman.hpp"

#include <algorithm>
#include <limits>

#include "slopekit/error.hpp"

namespace slopekit::coleman {

namespace {

int ceil_div(int a, int b) { return a >= 0 ? (a + b - 1) / b : -((-a) / b); }

int ladder_dim(int k, int p, int i) { return i < 0 ? 0 : qexp::basis_dimension(k + i * (p - 1)); }

void require_inputs(int k, int p, int depth) {
  qexp::require_supported_prime(p);
  if (k % 2 != 0) throw InvalidArgument("odd weight " + std::to_string(k) + " has no level-one forms");
  if (depth < 0) throw InvalidArgument("twist depth must be nonnegative");
}

}  // namespace

std::vector<int> katz_block_sizes(int k, int p, int depth) {
  std::vector<int> sizes;
  for (int i = 0; i <= depth; ++i) sizes.push_back(ladder_dim(k, p, i) - ladder_dim(k, p, i - 1));
  return sizes;
}

int katz_dimension(int k, int p, int depth) { return ladder_dim(k, p, depth); }

int katz_block_of(int k, int p, int n) {
  int i = 0;
  while (ladder_dim(k, p, i) <= n) ++i;
  return i;
}

KatzBasis katz_basis(int k, int p, int depth, int qprec, int m) {
  require_inputs(k, p, depth);
  KatzBasis basis;
  basis.p = p;
  basis.weight = k;
  basis.depth = depth;
  basis.qprec = qprec;
  basis.m = m;
  basis.block_sizes = katz_block_sizes(k, p, depth);
  const int d = katz_dimension(k, p, depth);
  if (qprec < required_qprec(k, p, depth))
    throw PrecisionError("katz_basis: q-precision " + std::to_string(qprec) + " below required " +
                         std::to_string(required_qprec(k, p, depth)) + " (p * D with D = " + std::to_string(d) + ")");

  const CoefficientRing ring = CoefficientRing::mod_pm(p, m);
  const QSeries e_inv = qexp::eisenstein(p - 1, qprec, ring).inverse();
  QSeries twist = QSeries::one(ring, qprec);
  for (int i = 0; i <= depth; ++i) {
    if (i > 0) twist = twist * e_inv;
    const int lo = ladder_dim(k, p, i - 1);
    const int hi = ladder_dim(k, p, i);
    if (hi == lo) continue;
    const auto miller = qexp::miller_basis(k + i * (p - 1), qprec, ring);
    for (int j = lo; j < hi; ++j) basis.elements.push_back({i, j, miller.forms[j] * twist});
  }
  return basis;
}

int normalization_shift(int k, Normalization n) {
  if (n == Normalization::Naive) return 1;
  return k <= 1 ? 1 - k : 0;
}

int row_decay(int p, int block) { return ceil_div(p * block, p + 1) - 1; }
int column_growth(int p, int block) { return ceil_div(block, p + 1); }
int block_decay(int p, int block) { return row_decay(p, block) - column_growth(p, block); }
int weight_deficit(int k, int p) { return k < 0 ? ceil_div(-k, p + 1) : 0; }

std::vector<long long> katz_valuation_floor(int k, int p, Normalization norm, int n_max) {
  // block_decay is nondecreasing, so the n smallest row/column budgets are the first n elements.
  const int e = normalization_shift(k, norm) - weight_deficit(k, p);
  std::vector<long long> floor(static_cast<std::size_t>(n_max) + 1, 0);
  for (int n = 1; n <= n_max; ++n) floor[n] = floor[n - 1] + block_decay(p, katz_block_of(k, p, n - 1)) + e;
  return floor;
}

long long truncation_digits(int k, int p, int depth, Normalization norm, int n) {
  if (n <= 0) return std::numeric_limits<int>::max();
  const auto floor = katz_valuation_floor(k, p, norm, n - 1);
  return block_decay(p, depth + 1) - weight_deficit(k, p) + normalization_shift(k, norm) + floor[n - 1];
}

int default_depth(int p, int m) {
  int depth = 0;
  while (block_decay(p, depth + 1) < m) ++depth;
  return depth;
}

int required_qprec(int k, int p, int depth) { return p * std::max(1, katz_dimension(k, p, depth)); }

PadicMatrix up_matrix(const KatzBasis& basis, Normalization norm) {
  const Modulus mod(basis.p, basis.m);
  const auto d = static_cast<std::size_t>(basis.dim());
  const std::string tag = "katz(k=" + std::to_string(basis.weight) + ",I=" + std::to_string(basis.depth) + ")";
  if (d == 0) return PadicMatrix(mod, 0, 0, tag);

  PadicMatrix b(mod, d, d, tag);
  PadicMatrix images(mod, d, d, tag);
  for (std::size_t j = 0; j < d; ++j) {
    const auto& e = basis.elements[j].expansion;
    const QSeries image = norm == Normalization::Naive ? qexp::up_naive(e, basis.p) : qexp::up(e, basis.weight, basis.p);
    for (std::size_t i = 0; i < d; ++i) {
      b(i, j) = from_bigint(e[static_cast<int>(i)]);
      images(i, j) = from_bigint(image[static_cast<int>(i)]);
    }
  }
  // Elements beyond the truncation lead with q^{>= D}, so the first D
  // coefficients determine the truncated coordinates exactly.
  auto solved = solve_in_basis(images, b, 0);
  solved.coordinates.set_basis_tag(tag);
  return solved.coordinates;
}

CharSeries up_char_series(const KatzBasis& basis, const PadicMatrix& u, Normalization norm) {
  const int d = basis.dim();
  CharSeries s;
  if (d == 0) {
    s.p = basis.p;
    s.coeffs.push_back(PadicScalar::from_int(Modulus(basis.p, basis.m), 1));
  } else {
    s = char_series(u);
  }
  for (int n = 1; n <= d; ++n) {
    const long long digits = truncation_digits(basis.weight, basis.p, basis.depth, norm, n);
    if (digits < s.coeffs[n].precision()) s.coeffs[n] = s.coeffs[n].reduced(static_cast<int>(std::max(0LL, digits)));
  }
  s.valuation_floor = katz_valuation_floor(basis.weight, basis.p, norm, 2 * d + 2 * (basis.p + 1));
  refresh_reliable_degree(s);
  return s;
}

// ---------------------------------------------------------------------------
// Classical oracle

namespace {

using Poly = std::vector<BigInt>;

// Characteristic polynomial det(x - A), highest degree first (Berkowitz).
Poly berkowitz(const std::vector<std::vector<BigInt>>& a) {
  const std::size_t n = a.size();
  Poly vect{1};
  for (std::size_t i = n; i-- > 0;) {
    const std::size_t s = n - i;
    Poly t(s + 1, 0);
    t[0] = 1;
    t[1] = -a[i][i];
    std::vector<BigInt> d(s - 1);
    for (std::size_t r = 0; r + 1 < s; ++r) d[r] = a[i + 1 + r][i];
    for (std::size_t j = 0; j + 1 < s; ++j) {
      BigInt dot = 0;
      for (std::size_t c = 0; c + 1 < s; ++c) dot += a[i][i + 1 + c] * d[c];
      t[2 + j] = -dot;
      std::vector<BigInt> nd(s - 1, 0);
      for (std::size_t r = 0; r + 1 < s; ++r)
        for (std::size_t c = 0; c + 1 < s; ++c) nd[r] += a[i + 1 + r][i + 1 + c] * d[c];
      d = std::move(nd);
    }
    Poly next(s + 1, 0);
    for (std::size_t r = 0; r <= s; ++r)
      for (std::size_t c = 0; c < s && c <= r; ++c) next[r] += t[r - c] * vect[c];
    vect = std::move(next);
  }
  return vect;
}

long long valuation(BigInt x, int p) {
  long long v = 0;
  while (x % p == 0) {
    x /= p;
    ++v;
  }
  return v;
}

// Slopes of an exact polynomial 1 + c_1 T + ... given lowest degree first.
std::vector<Rational> exact_slopes(const Poly& c, int p) {
  std::vector<std::pair<long long, long long>> pts;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i] != 0) pts.emplace_back(static_cast<long long>(i), valuation(c[i], p));
  std::vector<std::pair<long long, long long>> hull;
  for (const auto& pt : pts) {
    while (hull.size() >= 2) {
      const auto& a = hull[hull.size() - 2];
      const auto& b = hull.back();
      if ((b.second - a.second) * (pt.first - a.first) >= (pt.second - a.second) * (b.first - a.first)) hull.pop_back();
      else break;
    }
    hull.push_back(pt);
  }
  std::vector<Rational> out;
  for (std::size_t i = 1; i < hull.size(); ++i) {
    const Rational s(hull[i].second - hull[i - 1].second, hull[i].first - hull[i - 1].first);
    for (long long j = hull[i - 1].first; j < hull[i].first; ++j) out.push_back(s);
  }
  return out;
}

}  // namespace

std::vector<Rational> ClassicalSpectrum::all() const {
  std::vector<Rational> out = old_slopes;
  for (int i = 0; i < new_multiplicity; ++i) out.push_back(new_slope);
  for (int i = 0; i < eisenstein_extra; ++i) out.emplace_back(0);
  std::sort(out.begin(), out.end());
  return out;
}

int cusp_dimension_level1(int k) {
  if (k < 4 || k % 2 != 0) return 0;
  return qexp::basis_dimension(k) - 1;
}

int cusp_dimension_gamma0(int k, int p) {
  if (k < 2 || k % 2 != 0) throw InvalidArgument("cusp_dimension_gamma0: needs even k >= 2");
  const int nu2 = p % 4 == 1 ? 2 : 0;
  const int nu3 = p % 3 == 1 ? 2 : 0;
  const int cusps = 2;
  // 12(g - 1) = (p + 1) - 3 nu2 - 4 nu3 - 6 cusps
  const int twelve_g_minus_1 = (p + 1) - 3 * nu2 - 4 * nu3 - 6 * cusps;
  if (twelve_g_minus_1 % 12 != 0) throw InternalError("non-integral genus");
  const int g = 1 + twelve_g_minus_1 / 12;
  if (k == 2) return g;
  return (k - 1) * (g - 1) + (k / 2 - 1) * cusps + nu2 * (k / 4) + nu3 * (k / 3);
}

ClassicalSpectrum classical_up_spectrum(int k, int p) {
  qexp::require_supported_prime(p);
  if (k < 2 || k % 2 != 0) throw InvalidArgument("classical_up_spectrum: needs even k >= 2");
  ClassicalSpectrum out;
  out.new_slope = Rational(k - 2, 2);
  out.new_multiplicity = cusp_dimension_gamma0(k, p) - 2 * cusp_dimension_level1(k);
  if (out.new_multiplicity < 0) throw InternalError("negative new-subspace dimension");
  if (k == 2) {
    out.eisenstein_extra = 1;
    return out;
  }

  const int d = qexp::basis_dimension(k);
  const auto basis = qexp::miller_basis(k, p * d + p);
  // a 2d x 2d companion of the old-space U_p: [[T_p, 1], [-p^{k-1}, 0]].
  std::vector<std::vector<BigInt>> big(2 * d, std::vector<BigInt>(2 * d, 0));
  const BigInt pk = boost::multiprecision::pow(BigInt(p), static_cast<unsigned>(k - 1));
  for (int j = 0; j < d; ++j) {
    const auto image = qexp::hecke_tp(basis.forms[j], k, p);
    for (int i = 0; i < d; ++i) big[i][j] = image[i];
    big[j][d + j] = 1;
    big[d + j][j] = -pk;
  }
  const Poly charpoly = berkowitz(big);  // det(x - M) highest first == det(1 - T M) lowest first
  out.old_slopes = exact_slopes(charpoly, p);
  return out;
}

// ---------------------------------------------------------------------------

SlopeReport slope_spectrum(int k, int p, int depth, int m, int qprec) {
  require_inputs(k, p, depth);
  if (m < 1) throw InvalidArgument("working precision m must be >= 1");
  if (qprec != 0 && qprec < required_qprec(k, p, depth))
    throw InvalidArgument("q-precision " + std::to_string(qprec) + " is below the required p * D = " +
                          std::to_string(required_qprec(k, p, depth)));
  SlopeReport r;
  r.p = p;
  r.k = k;
  r.depth = depth;
  r.m = m;
  r.qprec = qprec == 0 ? required_qprec(k, p, depth) : qprec;
  r.m_effective = static_cast<int>(
      std::min<long long>(m, block_decay(p, depth + 1) - weight_deficit(k, p) + normalization_shift(k, Normalization::Normalized)));

  const auto basis = katz_basis(k, p, depth, r.qprec, m);
  const auto u = up_matrix(basis, Normalization::Normalized);
  r.series = up_char_series(basis, u, Normalization::Normalized);
  r.polygon = newton_polygon(r.series);
  const auto un = up_matrix(basis, Normalization::Naive);
  r.naive_polygon = newton_polygon(up_char_series(basis, un, Normalization::Naive));

  for (const auto& s : r.polygon.slopes) r.nonnegative = r.nonnegative && s.value >= Rational(0);

  const Rational shift(std::min(1, k));
  std::optional<Rational> bound = r.naive_polygon.complete_below;
  if (r.polygon.complete_below) {
    const Rational b = *r.polygon.complete_below + shift;
    bound = bound ? std::min(*bound, b) : b;
  }
  std::vector<Rational> lhs, rhs;
  for (const auto& s : r.polygon.flattened())
    if (!bound || s + shift < *bound) lhs.push_back(s + shift);
  for (const auto& s : r.naive_polygon.flattened())
    if (!bound || s < *bound) rhs.push_back(s);
  r.naive_consistent = lhs == rhs;

  if (k >= 2) r.classical = classical_up_spectrum(k, p);
  return r;
}

std::string to_string(ClassicalityVerdict::Kind kind) {
  switch (kind) {
    case ClassicalityVerdict::Kind::Pass: return "pass";
    case ClassicalityVerdict::Kind::Fail: return "fail";
    case ClassicalityVerdict::Kind::Indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

ClassicalityVerdict classicality_check(int k, int p, int depth, int m, int qprec) {
  if (k < 2) throw InvalidArgument("classicality_check: needs k >= 2");
  ClassicalityVerdict v;
  v.report = slope_spectrum(k, p, depth, m, qprec);
  const Rational threshold(k - 1);
  v.window = std::min(threshold, Rational(m - 2));
  if (v.report.polygon.complete_below) v.window = std::min(v.window, *v.report.polygon.complete_below);
  v.full_window = v.window == threshold;

  v.overconvergent = v.report.polygon.slopes_below(v.window);
  for (const auto& s : v.report.classical->all()) {
    if (s < v.window) v.classical.push_back(s);
    if (s == threshold) ++v.boundary_classical;
  }
  for (const auto& s : v.report.polygon.flattened())
    if (s == threshold) ++v.boundary_overconvergent;

  if (v.window <= Rational(0)) v.kind = ClassicalityVerdict::Kind::Indeterminate;
  else v.kind = v.overconvergent == v.classical ? ClassicalityVerdict::Kind::Pass : ClassicalityVerdict::Kind::Fail;
  return v;
}

}  // namespace slopekit::coleman
