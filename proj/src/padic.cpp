#include "slopekit/padic.hpp"

#include <algorithm>

#include "slopekit/error.hpp"

namespace slopekit {

namespace {

using Wide = boost::multiprecision::uint256_t;

constexpr Residue kMaxModulus = static_cast<Residue>(1) << 126;

Wide widen(Residue x) {
  Wide w = static_cast<std::uint64_t>(x >> 64);
  w <<= 64;
  w |= static_cast<std::uint64_t>(x);
  return w;
}

Residue narrow(const Wide& w) {
  const Wide mask = std::numeric_limits<std::uint64_t>::max();
  const auto lo = static_cast<std::uint64_t>(w & mask);
  const auto hi = static_cast<std::uint64_t>((w >> 64) & mask);
  return (static_cast<Residue>(hi) << 64) | lo;
}

}  // namespace

bool is_prime(long long n) {
  if (n < 2) return false;
  for (long long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

Modulus::Modulus(int p, int m) : p_(p), m_(m), pm_(1) {
  if (p < 3 || !is_prime(p)) throw InvalidArgument("modulus prime must be an odd prime, got " + std::to_string(p));
  if (m < 0) throw InvalidArgument("precision exponent must be nonnegative");
  for (int i = 0; i < m; ++i) {
    if (pm_ > kMaxModulus / static_cast<Residue>(p))
      throw PrecisionError("p^m exceeds the 126-bit residue range (p=" + std::to_string(p) +
                           ", m=" + std::to_string(m) + ")");
    pm_ *= static_cast<Residue>(p);
  }
}

Residue Modulus::reduce(const BigInt& x) const {
  BigInt r = x % to_bigint(pm_);
  if (r < 0) r += to_bigint(pm_);
  return from_bigint(r);
}

Residue Modulus::reduce(long long x) const {
  if (x >= 0) return static_cast<Residue>(x) % pm_;
  const Residue a = static_cast<Residue>(-(x + 1)) + 1;
  return neg(a % pm_);
}

Residue Modulus::mul(Residue a, Residue b) const {
  if (pm_ <= (static_cast<Residue>(1) << 32))
    return static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(b) % static_cast<std::uint64_t>(pm_);
  if (pm_ <= (static_cast<Residue>(1) << 64)) return (a * b) % pm_;
  return narrow((widen(a) * widen(b)) % widen(pm_));
}

Residue Modulus::pow(Residue base, const BigInt& exponent) const {
  if (exponent < 0) throw InvalidArgument("negative exponent");
  Residue result = 1 % pm_;
  Residue b = base % pm_;
  BigInt e = exponent;
  while (e > 0) {
    if ((e & 1) != 0) result = mul(result, b);
    b = mul(b, b);
    e >>= 1;
  }
  return result;
}

Residue Modulus::p_power(int e) const {
  if (e < 0) throw InvalidArgument("negative power of p");
  if (e >= m_) return 0;
  Residue r = 1;
  for (int i = 0; i < e; ++i) r *= static_cast<Residue>(p_);
  return r;
}

int Modulus::valuation(Residue x) const noexcept {
  if (x % pm_ == 0) return m_;
  int v = 0;
  const auto pp = static_cast<Residue>(p_);
  while (x % pp == 0) {
    x /= pp;
    ++v;
  }
  return v;
}

std::optional<Residue> Modulus::inverse(Residue x) const {
  if (m_ == 0) return Residue{0};
  if (x % static_cast<Residue>(p_) == 0) return std::nullopt;
  // Newton iteration x_{j+1} = x_j (2 - a x_j) doubles the number of correct digits.
  Residue inv = 1;
  const auto pp = static_cast<Residue>(p_);
  for (Residue t = 1; t < pp; ++t)
    if ((x % pp) * t % pp == 1) {
      inv = t;
      break;
    }
  for (int digits = 1; digits < m_; digits *= 2) {
    const Residue ax = mul(x % pm_, inv);
    inv = mul(inv, sub(2 % pm_, ax));
  }
  return inv % pm_;
}

std::string to_decimal(Residue x) {
  if (x == 0) return "0";
  std::string s;
  while (x > 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(x % 10)));
    x /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

BigInt to_bigint(Residue x) {
  BigInt hi = static_cast<std::uint64_t>(x >> 64);
  return (hi << 64) | BigInt(static_cast<std::uint64_t>(x));
}

Residue from_bigint(const BigInt& x) {
  if (x < 0) throw InternalError("from_bigint on a negative value");
  const BigInt mask = std::numeric_limits<std::uint64_t>::max();
  const auto lo = static_cast<std::uint64_t>(x & mask);
  const auto hi = static_cast<std::uint64_t>((x >> 64) & mask);
  return (static_cast<Residue>(hi) << 64) | lo;
}

PadicScalar::PadicScalar(const Modulus& mod, Residue residue) : mod_(mod), r_(residue % mod.value()) {}

namespace {
Modulus common(const Modulus& a, const Modulus& b) {
  if (a.p() != b.p()) throw InvalidArgument("mixing scalars over different primes");
  return a.m() <= b.m() ? a : b;
}
}  // namespace

PadicScalar PadicScalar::operator+(const PadicScalar& o) const {
  const Modulus c = common(mod_, o.mod_);
  return PadicScalar(c, c.add(r_ % c.value(), o.r_ % c.value()));
}

PadicScalar PadicScalar::operator-(const PadicScalar& o) const {
  const Modulus c = common(mod_, o.mod_);
  return PadicScalar(c, c.sub(r_ % c.value(), o.r_ % c.value()));
}

PadicScalar PadicScalar::operator*(const PadicScalar& o) const {
  const Modulus c = common(mod_, o.mod_);
  return PadicScalar(c, c.mul(r_ % c.value(), o.r_ % c.value()));
}

bool PadicScalar::congruent(const PadicScalar& o) const {
  return congruent(o, std::min(precision(), o.precision()));
}

bool PadicScalar::congruent(const PadicScalar& o, int digits) const {
  if (p() != o.p()) return false;
  digits = std::min({digits, precision(), o.precision()});
  if (digits <= 0) return true;
  const Modulus c = mod_.with_precision(digits);
  return r_ % c.value() == o.r_ % c.value();
}

PadicScalar PadicScalar::reduced(int m) const {
  if (m > precision()) throw PrecisionError("cannot raise precision of a scalar");
  const Modulus c = mod_.with_precision(m);
  return PadicScalar(c, r_ % c.value());
}

PadicScalar PadicScalar::inverse() const {
  const auto inv = mod_.inverse(r_);
  if (!inv) throw InvalidArgument("scalar " + to_string() + " is not a unit mod p");
  return PadicScalar(mod_, *inv);
}

PadicScalar PadicScalar::divide(const PadicScalar& divisor) const {
  const Modulus c = common(mod_, divisor.mod_);
  const Residue d = divisor.r_ % c.value();
  const int v = c.valuation(d);
  if (v >= c.m()) throw PrecisionError("division by a value indistinguishable from zero");
  const Residue num = r_ % c.value();
  const int vn = c.valuation(num);
  if (vn < v) throw PrecisionError("quotient is not integral at the known precision");
  const Residue pv = c.p_power(v);
  const Modulus out = c.with_precision(c.m() - v);
  const Residue unit = *out.inverse((d / pv) % out.value());
  return PadicScalar(out, out.mul((num / pv) % out.value(), unit));
}

}  // namespace slopekit
