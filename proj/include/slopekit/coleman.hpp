#pragma once

#include <optional>
#include <string>
#include <vector>

#include "slopekit/qexp.hpp"
#include "slopekit/spectral.hpp"

namespace slopekit::coleman {

/// b_{i,j} * E_{p-1}^{-i}: a weight-k overconvergent form whose q-expansion
/// starts at q^index with coefficient 1.
struct KatzElement {
  int block = 0;
  int index = 0;
  QSeries expansion;
};

/// Katz-expansion model of weight-k overconvergent forms truncated at twist
/// depth I. Block i holds the Miller forms of weight k + i(p-1) that are not
/// E_{p-1} times a form of weight k + (i-1)(p-1); element n leads with q^n.
struct KatzBasis {
  int p = 0;
  int weight = 0;
  int depth = 0;
  int qprec = 0;
  int m = 0;
  std::vector<int> block_sizes;
  std::vector<KatzElement> elements;

  int dim() const { return static_cast<int>(elements.size()); }
};

std::vector<int> katz_block_sizes(int k, int p, int depth);
int katz_dimension(int k, int p, int depth);

/// Block index of element n of the infinite Katz basis of weight k.
int katz_block_of(int k, int p, int n);

KatzBasis katz_basis(int k, int p, int depth, int qprec, int m);

/// Which U_p the matrix represents.
enum class Normalization { Normalized, Naive };

/// Extra power of p on top of sum a_{np} q^n.
int normalization_shift(int k, Normalization n);

/// Lower bound for v_p of the (row block a, column block b) entry of sum a_{np} q^n
/// in the weight-k Katz basis: row_decay(a) - column_growth(b) - weight_deficit(k).
/// Checked against computed matrices, not derived; tight for p in {5, 7, 11, 13}.
int row_decay(int p, int block);
int column_growth(int p, int block);
int block_decay(int p, int block);
int weight_deficit(int k, int p);

/// v_p(c_n) >= floor[n] for the characteristic series of the untruncated operator.
std::vector<long long> katz_valuation_floor(int k, int p, Normalization norm, int n_max);

/// Digits to which c_n of the depth-I truncation agrees with the untruncated series.
long long truncation_digits(int k, int p, int depth, Normalization norm, int n);

/// Smallest depth whose truncation error does not limit working precision m.
int default_depth(int p, int m);

/// q-precision katz_basis needs at depth I.
int required_qprec(int k, int p, int depth);

/// Matrix of U_p on the Katz basis, columns = images. Entries are exact mod p^m
/// for the truncated operator.
PadicMatrix up_matrix(const KatzBasis& basis, Normalization norm = Normalization::Normalized);

/// det(1 - T U) of the truncation, with per-coefficient precision lowered to
/// the truncation error and the a-priori valuation floor attached.
CharSeries up_char_series(const KatzBasis& basis, const PadicMatrix& u, Normalization norm);

struct ClassicalSpectrum {
  std::vector<Rational> old_slopes;  // pairs from x^2 - a_p x + p^{k-1}
  Rational new_slope;                // (k-2)/2
  int new_multiplicity = 0;
  int eisenstein_extra = 0;          // weight 2: the single Eisenstein class of slope 0
  std::vector<Rational> all() const;
};

/// dim S_k(Gamma_0(p)) for even k >= 2.
int cusp_dimension_gamma0(int k, int p);
/// dim S_k(SL_2(Z)).
int cusp_dimension_level1(int k);

/// Classical U_p slopes on M_k(Gamma_0(p)) from level-one T_p data and the
/// new-subspace dimension.
ClassicalSpectrum classical_up_spectrum(int k, int p);

struct SlopeReport {
  int p = 0;
  int k = 0;
  int depth = 0;
  int qprec = 0;
  int m = 0;
  int m_effective = 0;
  CharSeries series;
  NewtonPolygon polygon;
  NewtonPolygon naive_polygon;
  bool nonnegative = true;
  /// Naive slopes equal normalized slopes + inf(1, k) on the common certified window.
  bool naive_consistent = true;
  std::optional<ClassicalSpectrum> classical;
};

/// qprec 0 picks the smallest valid value, p * D.
SlopeReport slope_spectrum(int k, int p, int depth, int m, int qprec = 0);

struct ClassicalityVerdict {
  enum class Kind { Pass, Fail, Indeterminate };
  Kind kind = Kind::Indeterminate;
  Rational window;                   // compared slopes lie strictly below this
  bool full_window = false;          // window reached k - 1
  std::vector<Rational> overconvergent;
  std::vector<Rational> classical;
  int boundary_classical = 0;        // classical classes of slope exactly k - 1
  int boundary_overconvergent = 0;
  SlopeReport report;
};

std::string to_string(ClassicalityVerdict::Kind kind);

/// Compares overconvergent and classical slopes strictly below
/// min(k - 1, m - 2, certified bound).
ClassicalityVerdict classicality_check(int k, int p, int depth, int m, int qprec = 0);

}  // namespace slopekit::coleman
