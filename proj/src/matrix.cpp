#include "slopekit/matrix.hpp"

#include <algorithm>
#include <numeric>

#include "slopekit/error.hpp"

namespace slopekit {

PadicMatrix::PadicMatrix(const Modulus& mod, std::size_t rows, std::size_t cols, std::string basis_tag)
    : mod_(mod), rows_(rows), cols_(cols), data_(rows * cols, 0), tag_(std::move(basis_tag)),
      precision_(mod.m()) {}

PadicMatrix PadicMatrix::identity(const Modulus& mod, std::size_t n, std::string basis_tag) {
  PadicMatrix id(mod, n, n, std::move(basis_tag));
  for (std::size_t i = 0; i < n; ++i) id(i, i) = 1 % mod.value();
  return id;
}

PadicMatrix PadicMatrix::from_rows(const Modulus& mod, const std::vector<std::vector<long long>>& rows,
                                   std::string basis_tag) {
  const std::size_t n = rows.size();
  const std::size_t c = n == 0 ? 0 : rows.front().size();
  PadicMatrix out(mod, n, c, std::move(basis_tag));
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != c) throw InvalidArgument("ragged matrix rows");
    for (std::size_t j = 0; j < c; ++j) out(i, j) = mod.reduce(rows[i][j]);
  }
  return out;
}

void PadicMatrix::set_precision(int digits) {
  precision_ = std::clamp(digits, 0, mod_.m());
}

PadicScalar PadicMatrix::entry(std::size_t i, std::size_t j) const {
  return PadicScalar(mod_.with_precision(precision_), (*this)(i, j));
}

std::vector<Residue> PadicMatrix::column(std::size_t j) const {
  std::vector<Residue> c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

namespace {
void require_same_shape(const PadicMatrix& a, const PadicMatrix& b) {
  if (a.modulus() != b.modulus()) throw InvalidArgument("matrices over different moduli");
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw InvalidArgument("matrix shape mismatch");
}
}  // namespace

PadicMatrix PadicMatrix::operator+(const PadicMatrix& o) const {
  require_same_shape(*this, o);
  PadicMatrix r(mod_, rows_, cols_, tag_);
  for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] = mod_.add(data_[k], o.data_[k]);
  r.set_precision(std::min(precision_, o.precision_));
  return r;
}

PadicMatrix PadicMatrix::operator-(const PadicMatrix& o) const {
  require_same_shape(*this, o);
  PadicMatrix r(mod_, rows_, cols_, tag_);
  for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] = mod_.sub(data_[k], o.data_[k]);
  r.set_precision(std::min(precision_, o.precision_));
  return r;
}

PadicMatrix PadicMatrix::operator*(const PadicMatrix& o) const {
  if (mod_ != o.mod_) throw InvalidArgument("matrices over different moduli");
  if (cols_ != o.rows_) throw InvalidArgument("matrix product shape mismatch");
  PadicMatrix r(mod_, rows_, o.cols_, tag_);
  const Residue pm = mod_.value();
  if (pm <= (static_cast<Residue>(1) << 32)) {
    // Small moduli: accumulate in 64 bits and reduce only when the next
    // product could overflow.
    const std::uint64_t q = static_cast<std::uint64_t>(pm);
    const std::uint64_t top = (q - 1) * (q - 1);
    const std::uint64_t limit = top == 0 ? ~0ULL : ~0ULL - top;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < o.cols_; ++j) {
        std::uint64_t acc = 0;
        for (std::size_t k = 0; k < cols_; ++k) {
          if (acc > limit) acc %= q;
          acc += static_cast<std::uint64_t>((*this)(i, k)) * static_cast<std::uint64_t>(o(k, j));
        }
        r(i, j) = acc % q;
      }
    r.set_precision(std::min(precision_, o.precision_));
    return r;
  }
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Residue a = (*this)(i, k);
      if (a == 0) continue;
      for (std::size_t j = 0; j < o.cols_; ++j) r(i, j) = mod_.add(r(i, j), mod_.mul(a, o(k, j)));
    }
  r.set_precision(std::min(precision_, o.precision_));
  return r;
}

PadicMatrix PadicMatrix::scaled(Residue c) const {
  PadicMatrix r = *this;
  for (auto& x : r.data_) x = mod_.mul(x, c % mod_.value());
  return r;
}

PadicMatrix PadicMatrix::transpose() const {
  PadicMatrix r(mod_, cols_, rows_, tag_.empty() ? std::string{} : tag_ + "^T");
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
  r.set_precision(precision_);
  return r;
}

PadicMatrix PadicMatrix::pow(unsigned long long e) const {
  if (!square()) throw InvalidArgument("power of a non-square matrix");
  PadicMatrix result = identity(mod_, rows_, tag_);
  result.set_precision(precision_);
  PadicMatrix base = *this;
  while (e > 0) {
    if (e & 1ULL) result = result * base;
    e >>= 1ULL;
    if (e > 0) base = base * base;
  }
  return result;
}

PadicMatrix PadicMatrix::reduced(int digits) const {
  if (digits > mod_.m()) throw PrecisionError("cannot raise matrix precision");
  const Modulus m2 = mod_.with_precision(digits);
  PadicMatrix r(m2, rows_, cols_, tag_);
  for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] = data_[k] % m2.value();
  r.set_precision(std::min(precision_, digits));
  return r;
}

PadicMatrix PadicMatrix::submatrix(std::span<const std::size_t> rows, std::span<const std::size_t> cols) const {
  PadicMatrix r(mod_, rows.size(), cols.size(), tag_);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) r(i, j) = (*this)(rows[i], cols[j]);
  r.set_precision(precision_);
  return r;
}

bool PadicMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](Residue x) { return x == 0; });
}

bool PadicMatrix::operator==(const PadicMatrix& o) const {
  return mod_ == o.mod_ && rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
}

bool PadicMatrix::congruent(const PadicMatrix& o, int digits) const {
  if (mod_.p() != o.mod_.p() || rows_ != o.rows_ || cols_ != o.cols_) return false;
  digits = std::min({digits, mod_.m(), o.mod_.m()});
  const Residue pm = mod_.with_precision(std::max(digits, 0)).value();
  for (std::size_t k = 0; k < data_.size(); ++k)
    if (data_[k] % pm != o.data_[k] % pm) return false;
  return true;
}

Residue PadicMatrix::trace() const {
  if (!square()) throw InvalidArgument("trace of a non-square matrix");
  Residue t = 0;
  for (std::size_t i = 0; i < rows_; ++i) t = mod_.add(t, (*this)(i, i));
  return t;
}

SolveResult solve_in_basis(const PadicMatrix& vectors, const PadicMatrix& basis, int loss_budget) {
  const Modulus& mod = basis.modulus();
  if (vectors.modulus() != mod) throw InvalidArgument("solve_in_basis: moduli differ");
  const std::size_t n = basis.rows();
  const std::size_t r = basis.cols();
  if (vectors.rows() != n) throw InvalidArgument("solve_in_basis: vector length differs from basis rows");
  if (r > n) throw InvalidArgument("solve_in_basis: more basis vectors than coordinates");
  if (loss_budget < 0) loss_budget = mod.m() - 1;

  // Augmented elimination on [basis | vectors] with full pivoting inside the basis block.
  const std::size_t nv = vectors.cols();
  std::vector<std::vector<Residue>> a(n, std::vector<Residue>(r + nv));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < r; ++j) a[i][j] = basis(i, j);
    for (std::size_t j = 0; j < nv; ++j) a[i][r + j] = vectors(i, j);
  }
  std::vector<std::size_t> col_perm(r);
  std::iota(col_perm.begin(), col_perm.end(), 0);

  int loss = 0;
  for (std::size_t step = 0; step < r; ++step) {
    int best = mod.m() + 1;
    std::size_t bi = step, bj = step;
    for (std::size_t i = step; i < n; ++i)
      for (std::size_t j = step; j < r; ++j) {
        const int v = mod.valuation(a[i][j]);
        if (v < best) {
          best = v;
          bi = i;
          bj = j;
        }
      }
    if (best >= mod.m()) throw PrecisionError("solve_in_basis: basis is singular at the working precision");
    loss += best;
    if (loss > loss_budget)
      throw PrecisionError("solve_in_basis: pivot valuations sum to " + std::to_string(loss) +
                           ", above the loss budget " + std::to_string(loss_budget));
    std::swap(a[step], a[bi]);
    if (bj != step) {
      for (auto& row : a) std::swap(row[step], row[bj]);
      std::swap(col_perm[step], col_perm[bj]);
    }
    const Residue pv = mod.p_power(best);
    const Residue unit_inv = *mod.inverse(a[step][step] / pv);
    for (auto& x : a[step]) x = mod.mul(x, unit_inv);
    // Pivot row now has p^best at the pivot. Eliminate below; every entry
    // below has valuation >= best so the multiplier is integral.
    for (std::size_t i = step + 1; i < n; ++i) {
      const Residue x = a[i][step];
      if (x == 0) continue;
      const Residue f = x / pv;
      for (std::size_t j = step; j < r + nv; ++j) a[i][j] = mod.sub(a[i][j], mod.mul(f, a[step][j]));
    }
  }

  const int prec = mod.m() - loss;
  const Modulus out_mod = mod;
  const Residue keep = mod.with_precision(prec).value();
  // Consistency of the surplus equations.
  for (std::size_t i = r; i < n; ++i)
    for (std::size_t j = 0; j < nv; ++j)
      if (a[i][r + j] % keep != 0)
        throw PrecisionError("solve_in_basis: vector " + std::to_string(j) + " is not in the span of the basis");

  // Back substitution: pivot rows have p^{v_s} on the diagonal, upper triangular.
  PadicMatrix coords(out_mod, r, nv, basis.basis_tag());
  for (std::size_t j = 0; j < nv; ++j) {
    std::vector<Residue> x(r, 0);
    for (std::size_t s = r; s-- > 0;) {
      Residue rhs = a[s][r + j];
      for (std::size_t t = s + 1; t < r; ++t) rhs = mod.sub(rhs, mod.mul(a[s][t], x[t]));
      const int v = mod.valuation(a[s][s]);
      if (v == 0) {
        x[s] = rhs;
      } else {
        if (mod.valuation(rhs) < v && rhs % keep != 0)
          throw PrecisionError("solve_in_basis: coordinate is not integral");
        // Division by p^v: the result is only known mod p^{m - v}; digits
        // above are filled with zero and covered by the reported precision.
        x[s] = rhs / mod.p_power(v);
      }
    }
    for (std::size_t s = 0; s < r; ++s) coords(col_perm[s], j) = x[s];
  }
  coords.set_precision(std::min(prec, std::min(vectors.precision(), basis.precision()) - loss));
  return {coords, loss, coords.precision()};
}

namespace {
std::vector<std::vector<long long>> mod_p_rows(const PadicMatrix& a) {
  const auto p = static_cast<Residue>(a.modulus().p());
  std::vector<std::vector<long long>> m(a.rows(), std::vector<long long>(a.cols()));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m[i][j] = static_cast<long long>(a(i, j) % p);
  return m;
}

long long inv_mod(long long x, long long p) {
  long long r = 1, b = x % p, e = p - 2;
  while (e > 0) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r;
}
}  // namespace

std::vector<std::size_t> independent_columns_mod_p(const PadicMatrix& a) {
  const long long p = a.modulus().p();
  auto m = mod_p_rows(a);
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t j = 0; j < a.cols() && row < a.rows(); ++j) {
    std::size_t piv = row;
    while (piv < a.rows() && m[piv][j] == 0) ++piv;
    if (piv == a.rows()) continue;
    std::swap(m[row], m[piv]);
    const long long inv = inv_mod(m[row][j], p);
    for (auto& x : m[row]) x = x * inv % p;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == row || m[i][j] == 0) continue;
      const long long f = m[i][j];
      for (std::size_t t = 0; t < a.cols(); ++t) m[i][t] = ((m[i][t] - f * m[row][t]) % p + p) % p;
    }
    pivots.push_back(j);
    ++row;
  }
  return pivots;
}

std::size_t rank_mod_p(const PadicMatrix& a) { return independent_columns_mod_p(a).size(); }

Residue determinant(const PadicMatrix& a) {
  if (!a.square()) throw InvalidArgument("determinant of a non-square matrix");
  const Modulus& mod = a.modulus();
  const std::size_t n = a.rows();
  std::vector<std::vector<Residue>> m(n, std::vector<Residue>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i][j] = a(i, j);
  // Row and column swaps only flip the sign and integral row operations keep
  // the determinant, so minimal-valuation pivoting is exact mod p^m.
  Residue det = 1 % mod.value();
  for (std::size_t c = 0; c < n; ++c) {
    int best = mod.m() + 1;
    std::size_t bi = c, bj = c;
    for (std::size_t i = c; i < n; ++i)
      for (std::size_t j = c; j < n; ++j) {
        const int v = mod.valuation(m[i][j]);
        if (v < best) {
          best = v;
          bi = i;
          bj = j;
        }
      }
    if (best >= mod.m()) return 0;
    if (bi != c) {
      std::swap(m[bi], m[c]);
      det = mod.neg(det);
    }
    if (bj != c) {
      for (auto& row : m) std::swap(row[bj], row[c]);
      det = mod.neg(det);
    }
    det = mod.mul(det, m[c][c]);
    const Residue pv = mod.p_power(best);
    const Residue unit_inv = *mod.inverse(m[c][c] / pv);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (m[i][c] == 0) continue;
      const Residue f = mod.mul(m[i][c] / pv, unit_inv);
      for (std::size_t j = c; j < n; ++j) m[i][j] = mod.sub(m[i][j], mod.mul(f, m[c][j]));
    }
  }
  return det;
}

PadicMatrix inverse(const PadicMatrix& a) {
  if (!a.square()) throw InvalidArgument("inverse of a non-square matrix");
  const PadicMatrix id = PadicMatrix::identity(a.modulus(), a.rows(), a.basis_tag());
  SolveResult s = solve_in_basis(id, a, 0);
  return s.coordinates;
}

}  // namespace slopekit
