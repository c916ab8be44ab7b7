#include "slopekit/qseries.hpp"

#include <algorithm>

#include "slopekit/error.hpp"

namespace slopekit {

Modulus CoefficientRing::modulus() const {
  if (kind != Kind::ModPM) throw InvalidArgument("the integer ring has no modulus");
  return Modulus(p, m);
}

std::string CoefficientRing::describe() const {
  if (kind == Kind::Integers) return "Z";
  return "Z/" + std::to_string(p) + "^" + std::to_string(m);
}

QSeries::QSeries(CoefficientRing ring, std::vector<BigInt> coeffs) : ring_(ring), c_(std::move(coeffs)) {
  if (ring_.kind == CoefficientRing::Kind::ModPM) (void)ring_.modulus();
  normalize();
}

void QSeries::normalize() {
  if (ring_.is_integers()) return;
  const BigInt pm = to_bigint(ring_.modulus().value());
  for (auto& x : c_) {
    x %= pm;
    if (x < 0) x += pm;
  }
}

QSeries QSeries::zero(CoefficientRing ring, int qprec) {
  return QSeries(ring, std::vector<BigInt>(static_cast<std::size_t>(std::max(qprec, 0))));
}

QSeries QSeries::one(CoefficientRing ring, int qprec) { return monomial(ring, qprec, 0); }

QSeries QSeries::monomial(CoefficientRing ring, int qprec, int n, const BigInt& c) {
  std::vector<BigInt> v(static_cast<std::size_t>(std::max(qprec, 0)));
  if (n >= 0 && n < qprec) v[static_cast<std::size_t>(n)] = c;
  return QSeries(ring, std::move(v));
}

QSeries QSeries::from_residues(const Modulus& mod, const std::vector<Residue>& r) {
  std::vector<BigInt> v;
  v.reserve(r.size());
  for (Residue x : r) v.push_back(to_bigint(x));
  return QSeries(CoefficientRing::mod_pm(mod.p(), mod.m()), std::move(v));
}

std::vector<Residue> QSeries::residues() const {
  const Modulus mod = ring_.modulus();
  std::vector<Residue> r;
  r.reserve(c_.size());
  for (const auto& x : c_) r.push_back(from_bigint(x));
  (void)mod;
  return r;
}

QSeries QSeries::truncated(int qprec) const {
  if (qprec > this->qprec()) throw PrecisionError("cannot extend a truncated q-expansion");
  return QSeries(ring_, std::vector<BigInt>(c_.begin(), c_.begin() + qprec));
}

QSeries QSeries::reduced(const CoefficientRing& target) const {
  if (target.is_integers()) {
    if (!ring_.is_integers()) throw InvalidArgument("cannot lift a residue series to Z");
    return *this;
  }
  if (!ring_.is_integers() && (ring_.p != target.p || ring_.m < target.m))
    throw InvalidArgument("incompatible reduction " + ring_.describe() + " -> " + target.describe());
  return QSeries(target, c_);
}

namespace {
void require_ring(const QSeries& a, const QSeries& b) {
  if (a.ring() != b.ring())
    throw InvalidArgument("q-series ring mismatch: " + a.ring().describe() + " vs " + b.ring().describe());
}
}  // namespace

QSeries QSeries::operator+(const QSeries& o) const {
  require_ring(*this, o);
  const int q = std::min(qprec(), o.qprec());
  std::vector<BigInt> v(static_cast<std::size_t>(q));
  for (int i = 0; i < q; ++i) v[i] = c_[i] + o.c_[i];
  return QSeries(ring_, std::move(v));
}

QSeries QSeries::operator-(const QSeries& o) const {
  require_ring(*this, o);
  const int q = std::min(qprec(), o.qprec());
  std::vector<BigInt> v(static_cast<std::size_t>(q));
  for (int i = 0; i < q; ++i) v[i] = c_[i] - o.c_[i];
  return QSeries(ring_, std::move(v));
}

QSeries QSeries::operator-() const {
  std::vector<BigInt> v(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i) v[i] = -c_[i];
  return QSeries(ring_, std::move(v));
}

QSeries QSeries::operator*(const QSeries& o) const {
  require_ring(*this, o);
  const int q = std::min(qprec(), o.qprec());
  if (!ring_.is_integers()) {
    const Modulus mod = ring_.modulus();
    const auto a = residues();
    const auto b = o.residues();
    std::vector<Residue> r(static_cast<std::size_t>(q), 0);
    for (int i = 0; i < q; ++i) {
      if (a[i] == 0) continue;
      for (int j = 0; i + j < q; ++j)
        if (b[j] != 0) r[i + j] = mod.add(r[i + j], mod.mul(a[i], b[j]));
    }
    return from_residues(mod, r);
  }
  std::vector<BigInt> v(static_cast<std::size_t>(q));
  for (int i = 0; i < q; ++i) {
    if (c_[i] == 0) continue;
    for (int j = 0; i + j < q; ++j)
      if (o.c_[j] != 0) v[i + j] += c_[i] * o.c_[j];
  }
  return QSeries(ring_, std::move(v));
}

QSeries QSeries::scaled(const BigInt& c) const {
  std::vector<BigInt> v(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i) v[i] = c_[i] * c;
  return QSeries(ring_, std::move(v));
}

QSeries QSeries::pow(unsigned e) const {
  QSeries result = one(ring_, qprec());
  QSeries base = *this;
  while (e > 0) {
    if (e & 1U) result = result * base;
    e >>= 1U;
    if (e > 0) base = base * base;
  }
  return result;
}

QSeries QSeries::inverse() const {
  if (c_.empty()) throw InvalidArgument("inverse of an empty series");
  const int q = qprec();
  if (ring_.is_integers()) {
    if (c_[0] != 1 && c_[0] != -1) throw InvalidArgument("constant term is not a unit of Z");
    std::vector<BigInt> g(static_cast<std::size_t>(q));
    g[0] = c_[0];
    for (int n = 1; n < q; ++n) {
      BigInt s = 0;
      for (int i = 1; i <= n; ++i) s += c_[i] * g[n - i];
      g[n] = -s * g[0];
    }
    return QSeries(ring_, std::move(g));
  }
  const Modulus mod = ring_.modulus();
  const auto a = residues();
  const auto inv0 = mod.inverse(a[0]);
  if (!inv0) throw InvalidArgument("constant term is not a unit mod p");
  std::vector<Residue> g(static_cast<std::size_t>(q), 0);
  g[0] = *inv0;
  for (int n = 1; n < q; ++n) {
    Residue s = 0;
    for (int i = 1; i <= n; ++i)
      if (a[i] != 0) s = mod.add(s, mod.mul(a[i], g[n - i]));
    g[n] = mod.neg(mod.mul(s, *inv0));
  }
  return from_residues(mod, g);
}

int QSeries::leading_index() const {
  for (int i = 0; i < qprec(); ++i)
    if (c_[i] != 0) return i;
  return qprec();
}

}  // namespace slopekit
