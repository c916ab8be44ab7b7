#include "slopekit/qexp.hpp"

#include <algorithm>

#include "slopekit/error.hpp"

namespace slopekit::qexp {

bool supported_prime(int p) {
  return std::find(std::begin(kSupportedPrimes), std::end(kSupportedPrimes), p) != std::end(kSupportedPrimes);
}

void require_supported_prime(int p) {
  if (!supported_prime(p))
    throw UnsupportedError("prime p=" + std::to_string(p) + " is outside the supported set {5, 7, 11, 13}");
}

BigRational bernoulli(int k) {
  if (k < 0) throw InvalidArgument("Bernoulli index must be nonnegative");
  // Akiyama-Tanigawa; yields B_1 = +1/2, irrelevant for the even indices used here.
  std::vector<BigRational> a(static_cast<std::size_t>(k) + 1);
  for (int m = 0; m <= k; ++m) {
    a[m] = BigRational(1, m + 1);
    for (int j = m; j >= 1; --j) a[j - 1] = BigRational(j) * (a[j - 1] - a[j]);
  }
  return a[0];
}

BigInt divisor_sigma(long long n, int power) {
  BigInt s = 0;
  for (long long d = 1; d * d <= n; ++d) {
    if (n % d != 0) continue;
    s += boost::multiprecision::pow(BigInt(d), static_cast<unsigned>(power));
    const long long e = n / d;
    if (e != d) s += boost::multiprecision::pow(BigInt(e), static_cast<unsigned>(power));
  }
  return s;
}

namespace {

BigInt ring_constant(const BigRational& c, const CoefficientRing& ring, const std::string& what) {
  const BigInt num = boost::multiprecision::numerator(c);
  const BigInt den = boost::multiprecision::denominator(c);
  if (ring.is_integers()) {
    if (den != 1) throw InvalidArgument(what + " is not integral over Z (denominator " + den.str() + ")");
    return num;
  }
  const Modulus mod = ring.modulus();
  const auto inv = mod.inverse(mod.reduce(den));
  if (!inv) throw InvalidArgument(what + " has denominator divisible by p=" + std::to_string(ring.p));
  return to_bigint(mod.mul(mod.reduce(num), *inv));
}

}  // namespace

QSeries eisenstein(int k, int qprec, CoefficientRing ring) {
  if (k < 4 || k % 2 != 0) throw InvalidArgument("eisenstein: weight must be even and >= 4, got " + std::to_string(k));
  if (qprec < 1) throw InvalidArgument("eisenstein: q-precision must be positive");
  const BigRational c = BigRational(-2 * k) / bernoulli(k);
  const BigInt scale = ring_constant(c, ring, "E_" + std::to_string(k));
  std::vector<BigInt> v(static_cast<std::size_t>(qprec));
  v[0] = 1;
  for (int n = 1; n < qprec; ++n) v[n] = scale * divisor_sigma(n, k - 1);
  return QSeries(ring, std::move(v));
}

QSeries delta(int qprec, CoefficientRing ring) {
  if (qprec < 1) throw InvalidArgument("delta: q-precision must be positive");
  std::vector<BigInt> prod(static_cast<std::size_t>(qprec));
  prod[0] = 1;
  for (int n = 1; n < qprec; ++n)
    for (int i = qprec - 1; i >= n; --i) prod[i] -= prod[i - n];
  const QSeries eta24 = QSeries(ring, std::move(prod)).pow(24);
  std::vector<BigInt> v(static_cast<std::size_t>(qprec));
  for (int i = 1; i < qprec; ++i) v[i] = eta24[i - 1];
  return QSeries(ring, std::move(v));
}

int basis_dimension(int k) {
  if (k < 0 || k % 2 != 0) return 0;
  return k / 12 + (k % 12 == 2 ? 0 : 1);
}

QSeries hasse_invariant(int p, int qprec) {
  if (p < 5 || !is_prime(p)) throw UnsupportedError("hasse_invariant: needs a prime p >= 5, got " + std::to_string(p));
  return eisenstein(p - 1, qprec, CoefficientRing::mod_pm(p, 1));
}

SpaceBasis miller_basis(int k, int qprec, CoefficientRing ring) {
  if (k % 2 != 0) throw InvalidArgument("miller_basis: odd weight " + std::to_string(k));
  SpaceBasis basis;
  basis.weight = k;
  basis.ring = ring;
  basis.qprec = qprec;
  const int d = basis_dimension(k);
  if (d == 0) return basis;
  if (qprec < d)
    throw PrecisionError("miller_basis: weight " + std::to_string(k) + " needs q-precision >= " + std::to_string(d));

  const QSeries e4 = eisenstein(4, qprec, ring);
  const QSeries e6 = eisenstein(6, qprec, ring);
  const QSeries dl = delta(qprec, ring);
  QSeries delta_power = QSeries::one(ring, qprec);
  std::vector<QSeries> forms;
  for (int j = 0; j < d; ++j) {
    const int w = k - 12 * j;
    QSeries f = (w % 4 == 0) ? e4.pow(static_cast<unsigned>(w / 4))
                             : e4.pow(static_cast<unsigned>((w - 6) / 4)) * e6;
    forms.push_back(f * delta_power);
    delta_power = delta_power * dl;
  }
  // Clear the coefficients above the diagonal inside the first d positions.
  for (int i = d - 1; i >= 1; --i)
    for (int j = 0; j < i; ++j) {
      const BigInt c = forms[j][i];
      if (c != 0) forms[j] = forms[j] - forms[i].scaled(c);
    }
  basis.forms = std::move(forms);
  return basis;
}

PadicScalar weight_coordinate(int k, const Modulus& mod) {
  const Residue one_plus_p = mod.reduce(1LL + mod.p());
  Residue pw = mod.pow(one_plus_p, BigInt(k < 0 ? -static_cast<long long>(k) : k));
  if (k < 0) pw = *mod.inverse(pw);
  return PadicScalar(mod, mod.sub(pw, 1 % mod.value()));
}

WeightPoint weight_point(int k, const Modulus& mod) {
  const int c = ((k % (mod.p() - 1)) + (mod.p() - 1)) % (mod.p() - 1);
  return WeightPoint{mod.p(), c, weight_coordinate(k, mod), k};
}

namespace {

void require_qprec(const QSeries& f, int p) {
  if (p < 2) throw InvalidArgument("Hecke operator needs a prime");
  if (f.qprec() < p)
    throw PrecisionError("q-precision " + std::to_string(f.qprec()) + " is below p=" + std::to_string(p));
}

BigInt ppow(int p, int e) { return boost::multiprecision::pow(BigInt(p), static_cast<unsigned>(e)); }

}  // namespace

QSeries hecke_tp(const QSeries& f, int k, int p) {
  require_qprec(f, p);
  const int out = f.qprec() / p;
  std::vector<BigInt> v(static_cast<std::size_t>(out));
  const BigInt up_scale = k >= 1 ? BigInt(1) : ppow(p, 1 - k);
  const BigInt frob_scale = k >= 1 ? ppow(p, k - 1) : BigInt(1);
  for (int n = 0; n < out; ++n) {
    v[n] = up_scale * f[n * p];
    if (n % p == 0) v[n] += frob_scale * f[n / p];
  }
  return QSeries(f.ring(), std::move(v));
}

QSeries up_naive(const QSeries& f, int p) {
  require_qprec(f, p);
  const int out = f.qprec() / p;
  std::vector<BigInt> v(static_cast<std::size_t>(out));
  for (int n = 0; n < out; ++n) v[n] = BigInt(p) * f[n * p];
  return QSeries(f.ring(), std::move(v));
}

QSeries up(const QSeries& f, int k, int p) {
  require_qprec(f, p);
  const int out = f.qprec() / p;
  const BigInt scale = k >= 1 ? BigInt(1) : ppow(p, 1 - k);
  std::vector<BigInt> v(static_cast<std::size_t>(out));
  for (int n = 0; n < out; ++n) v[n] = scale * f[n * p];
  return QSeries(f.ring(), std::move(v));
}

QSeries frobenius_f(const QSeries& f, int /*k*/, int p) {
  if (p < 2) throw InvalidArgument("frobenius_f needs a prime");
  std::vector<BigInt> v(static_cast<std::size_t>(f.qprec()));
  for (int n = 0; n < f.qprec(); n += p) v[n] = f[n / p];
  return QSeries(f.ring(), std::move(v));
}

QSeries theta(const QSeries& f) {
  std::vector<BigInt> v(static_cast<std::size_t>(f.qprec()));
  for (int n = 0; n < f.qprec(); ++n) v[n] = BigInt(n) * f[n];
  return QSeries(f.ring(), std::move(v));
}

int required_qprec(int out_qprec, int p) { return out_qprec * p; }

OperatorMatrix operator_matrix(const SpaceBasis& basis, const std::function<QSeries(const QSeries&)>& op,
                               const Modulus& mod) {
  const int d = basis.dim();
  const CoefficientRing target = CoefficientRing::mod_pm(mod.p(), mod.m());
  OperatorMatrix out{PadicMatrix(mod, static_cast<std::size_t>(d), static_cast<std::size_t>(d),
                                 "miller(k=" + std::to_string(basis.weight) + ")"),
                     true, 0};
  std::vector<QSeries> reduced_forms;
  reduced_forms.reserve(basis.forms.size());
  for (const auto& f : basis.forms) reduced_forms.push_back(f.reduced(target));
  for (int j = 0; j < d; ++j) {
    const QSeries image = op(basis.forms[j]).reduced(target);
    if (image.qprec() < d)
      throw PrecisionError("operator_matrix: image has q-precision " + std::to_string(image.qprec()) +
                           ", need >= " + std::to_string(d) + " (input q-precision too small)");
    // Echelon basis: the first d coefficients are the coordinates.
    QSeries residual = image;
    for (int i = 0; i < d; ++i) {
      const Residue c = mod.reduce(image[i]);
      out.matrix(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = c;
      if (c != 0) residual = residual - reduced_forms[i].truncated(std::min(reduced_forms[i].qprec(), residual.qprec())).scaled(to_bigint(c));
    }
    out.compared_coefficients = residual.qprec();
    if (!residual.is_zero()) out.closed = false;
  }
  return out;
}

}  // namespace slopekit::qexp
