#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "slopekit/padic.hpp"

namespace slopekit {

/// Dense matrix over Z/p^m.
///
/// `precision()` is the number of digits that are meaningful: entries are
/// stored mod p^m but only determined mod p^precision after lossy solves.
class PadicMatrix {
 public:
  PadicMatrix(const Modulus& mod, std::size_t rows, std::size_t cols, std::string basis_tag = {});

  static PadicMatrix identity(const Modulus& mod, std::size_t n, std::string basis_tag = {});
  static PadicMatrix from_rows(const Modulus& mod, const std::vector<std::vector<long long>>& rows,
                               std::string basis_tag = {});

  const Modulus& modulus() const noexcept { return mod_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }
  const std::string& basis_tag() const noexcept { return tag_; }
  void set_basis_tag(std::string tag) { tag_ = std::move(tag); }

  int precision() const noexcept { return precision_; }
  void set_precision(int digits);

  Residue& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  Residue operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  PadicScalar entry(std::size_t i, std::size_t j) const;
  std::span<const Residue> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  std::vector<Residue> column(std::size_t j) const;

  PadicMatrix operator+(const PadicMatrix& o) const;
  PadicMatrix operator-(const PadicMatrix& o) const;
  PadicMatrix operator*(const PadicMatrix& o) const;
  PadicMatrix scaled(Residue c) const;
  PadicMatrix transpose() const;
  PadicMatrix pow(unsigned long long e) const;
  /// Same residues read modulo p^digits.
  PadicMatrix reduced(int digits) const;
  /// Rows/cols restricted to the given index lists.
  PadicMatrix submatrix(std::span<const std::size_t> rows, std::span<const std::size_t> cols) const;

  bool is_zero() const;
  /// Entry-wise equality of residues (the precision field is ignored).
  bool operator==(const PadicMatrix& o) const;
  bool operator!=(const PadicMatrix& o) const { return !(*this == o); }
  /// Agreement modulo p^digits.
  bool congruent(const PadicMatrix& o, int digits) const;

  Residue trace() const;

 private:
  Modulus mod_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Residue> data_;
  std::string tag_;
  int precision_;
};

struct SolveResult {
  PadicMatrix coordinates;  // one column per input vector
  int precision_loss = 0;   // total pivot valuation
  int precision = 0;        // m - precision_loss
};

/// Coordinates of each column of `vectors` in the basis formed by the
/// columns of `basis` (n x r, n >= r, full column rank mod the loss budget).
///
/// Elimination pivots on a minimal-valuation entry. Overdetermined systems are
/// checked for consistency at the surviving precision.
SolveResult solve_in_basis(const PadicMatrix& vectors, const PadicMatrix& basis, int loss_budget = -1);

/// Rank of the reduction mod p.
std::size_t rank_mod_p(const PadicMatrix& a);

/// Columns of `a` whose reductions mod p form a basis of the column space mod p,
/// chosen greedily left to right.
std::vector<std::size_t> independent_columns_mod_p(const PadicMatrix& a);

Residue determinant(const PadicMatrix& a);

/// Inverse of a matrix with unit determinant.
PadicMatrix inverse(const PadicMatrix& a);

}  // namespace slopekit
