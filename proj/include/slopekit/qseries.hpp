#pragma once

#include <optional>
#include <string>
#include <vector>

#include "slopekit/padic.hpp"

namespace slopekit {

struct CoefficientRing {
  enum class Kind { Integers, ModPM };

  Kind kind = Kind::Integers;
  int p = 0;
  int m = 0;

  static CoefficientRing integers() { return {}; }
  static CoefficientRing mod_pm(int p, int m) { return {Kind::ModPM, p, m}; }

  bool is_integers() const { return kind == Kind::Integers; }
  Modulus modulus() const;
  std::string describe() const;

  bool operator==(const CoefficientRing& o) const {
    return kind == o.kind && (kind == Kind::Integers || (p == o.p && m == o.m));
  }
  bool operator!=(const CoefficientRing& o) const { return !(*this == o); }
};

/// Truncated q-expansion a_0 + a_1 q + ... + a_{Q-1} q^{Q-1}.
///
/// Over ModPM the coefficients are kept as reduced residues in [0, p^m).
class QSeries {
 public:
  QSeries(CoefficientRing ring, std::vector<BigInt> coeffs);

  static QSeries zero(CoefficientRing ring, int qprec);
  static QSeries one(CoefficientRing ring, int qprec);
  static QSeries monomial(CoefficientRing ring, int qprec, int n, const BigInt& c = 1);
  static QSeries from_residues(const Modulus& mod, const std::vector<Residue>& r);

  const CoefficientRing& ring() const noexcept { return ring_; }
  int qprec() const noexcept { return static_cast<int>(c_.size()); }
  const BigInt& operator[](int n) const { return c_.at(static_cast<std::size_t>(n)); }
  const std::vector<BigInt>& coeffs() const noexcept { return c_; }
  std::vector<Residue> residues() const;

  QSeries truncated(int qprec) const;
  /// Change of coefficient ring: Z -> Z/p^m, or Z/p^m -> Z/p^{m'} with m' <= m.
  QSeries reduced(const CoefficientRing& target) const;

  QSeries operator+(const QSeries& o) const;
  QSeries operator-(const QSeries& o) const;
  QSeries operator*(const QSeries& o) const;
  QSeries operator-() const;
  QSeries scaled(const BigInt& c) const;
  QSeries pow(unsigned e) const;
  /// Multiplicative inverse; the constant term must be a unit of the ring.
  QSeries inverse() const;

  /// Index of the first nonzero coefficient, or qprec() if the series vanishes.
  int leading_index() const;
  bool is_zero() const { return leading_index() == qprec(); }

  bool operator==(const QSeries& o) const { return ring_ == o.ring_ && c_ == o.c_; }
  bool operator!=(const QSeries& o) const { return !(*this == o); }

 private:
  void normalize();

  CoefficientRing ring_;
  std::vector<BigInt> c_;
};

}  // namespace slopekit
