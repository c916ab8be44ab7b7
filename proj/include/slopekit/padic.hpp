#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <optional>
#include <string>

namespace slopekit {

using BigInt = boost::multiprecision::cpp_int;
using Residue = unsigned __int128;

bool is_prime(long long n);

/// Arithmetic context for Z/p^m.
///
/// p must be an odd prime and p^m must stay below 2^126 so that sums of two
/// residues never overflow the 128-bit storage type.
class Modulus {
 public:
  Modulus(int p, int m);

  int p() const noexcept { return p_; }
  int m() const noexcept { return m_; }
  Residue value() const noexcept { return pm_; }

  Residue reduce(const BigInt& x) const;
  Residue reduce(long long x) const;

  Residue add(Residue a, Residue b) const noexcept {
    Residue s = a + b;
    return s >= pm_ ? s - pm_ : s;
  }
  Residue sub(Residue a, Residue b) const noexcept { return a >= b ? a - b : a + (pm_ - b); }
  Residue neg(Residue a) const noexcept { return a == 0 ? 0 : pm_ - a; }
  Residue mul(Residue a, Residue b) const;

  Residue pow(Residue base, const BigInt& exponent) const;
  /// p^e reduced mod p^m (zero once e >= m).
  Residue p_power(int e) const;

  /// Largest v <= m with p^v | x; the zero residue has valuation m.
  int valuation(Residue x) const noexcept;
  std::optional<Residue> inverse(Residue x) const;

  /// Same prime, different exponent.
  Modulus with_precision(int m) const { return Modulus(p_, m); }

  bool operator==(const Modulus& o) const noexcept { return p_ == o.p_ && m_ == o.m_; }
  bool operator!=(const Modulus& o) const noexcept { return !(*this == o); }

 private:
  int p_;
  int m_;
  Residue pm_;
};

std::string to_decimal(Residue x);
BigInt to_bigint(Residue x);
Residue from_bigint(const BigInt& x);

/// Element of Z/p^m. The exponent m doubles as the number of known p-adic
/// digits; mixed-precision arithmetic yields the smaller exponent.
class PadicScalar {
 public:
  PadicScalar(const Modulus& mod, Residue residue);
  PadicScalar(const Modulus& mod, const BigInt& value) : PadicScalar(mod, mod.reduce(value)) {}
  static PadicScalar from_int(const Modulus& mod, long long value) {
    return PadicScalar(mod, mod.reduce(value));
  }

  const Modulus& modulus() const noexcept { return mod_; }
  int p() const noexcept { return mod_.p(); }
  int precision() const noexcept { return mod_.m(); }
  Residue residue() const noexcept { return r_; }

  int valuation() const noexcept { return mod_.valuation(r_); }
  bool is_zero() const noexcept { return r_ == 0; }
  bool is_unit() const noexcept { return mod_.m() > 0 && r_ % static_cast<Residue>(mod_.p()) != 0; }

  PadicScalar operator+(const PadicScalar& o) const;
  PadicScalar operator-(const PadicScalar& o) const;
  PadicScalar operator*(const PadicScalar& o) const;
  PadicScalar operator-() const { return PadicScalar(mod_, mod_.neg(r_)); }

  /// Exact equality including precision.
  bool operator==(const PadicScalar& o) const noexcept { return mod_ == o.mod_ && r_ == o.r_; }
  bool operator!=(const PadicScalar& o) const noexcept { return !(*this == o); }
  /// Agreement modulo the smaller of the two precisions.
  bool congruent(const PadicScalar& o) const;
  bool congruent(const PadicScalar& o, int digits) const;

  PadicScalar reduced(int m) const;
  PadicScalar inverse() const;
  /// Division by p^v * u for a unit u. The result loses v digits; throws
  /// PrecisionError when the quotient is not integral at the known precision.
  PadicScalar divide(const PadicScalar& divisor) const;

  BigInt lift() const { return to_bigint(r_); }
  std::string to_string() const { return to_decimal(r_); }

 private:
  Modulus mod_;
  Residue r_;
};

}  // namespace slopekit
