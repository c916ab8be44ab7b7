#pragma once

#include <map>
#include <optional>
#include <vector>

#include "slopekit/coleman.hpp"
#include "slopekit/hida.hpp"
#include "slopekit/spectral.hpp"

namespace slopekit::eigencurve {

/// Integer sample weights on one component of weight space.
struct WeightDisc {
  int p = 0;
  int component = 0;
  int center = 0;
  std::vector<int> samples;
  int poly_degree = -1;  // -1: one less than the number of samples
  int m = 0;
};

/// Checks the disc invariants and returns the polynomial degree in use.
int validate(const WeightDisc& disc);

/// Per-weight input to the interpolation.
struct SampleSeries {
  int k = 0;
  int depth = 0;
  CharSeries series;
};

/// det(1 - T U_p) with each coefficient c_n a polynomial in w. The Katz
/// truncation at sample k uses depth (K - k)/(p-1) for a shared top weight K,
/// so every sample has the same dimension D.
struct TwoVarCharSeries {
  WeightDisc disc;
  int poly_degree = 0;
  int top_weight = 0;
  int degree = 0;  // D
  int reliable_degree = 0;
  std::vector<int> fit_weights;              // the poly_degree + 1 nodes
  std::vector<hida::NewtonInterpolant> newton;  // index n, n = 0..D
  std::vector<hida::IwasawaTruncation> coeffs;  // monomial form of the same polynomials
  std::vector<SampleSeries> samples;         // sorted by weight
};

/// Depth used at weight k when the largest sample sits at depth `depth`.
int sample_depth(const WeightDisc& disc, int depth, int k);

/// Interpolates the per-weight series; samples beyond the first poly_degree + 1
/// are checked against the fit. qprec 0 picks the smallest valid value.
TwoVarCharSeries two_var_charseries(const WeightDisc& disc, int depth, int qprec = 0);

/// Per-weight series at the disc's depth convention, computed directly.
SampleSeries direct_series(const WeightDisc& disc, int depth, int k, int qprec = 0);

struct SpecializedSlopes {
  int k = 0;
  bool extrapolated = false;  // k is not a node of the fit
  CharSeries series;
  NewtonPolygon polygon;
};

/// c_n(w_k) with precision capped by the interpolation error bound
/// sum_i v_p(w_k - w_{k_i}), which holds because c_n lies in Z_p[[w]].
SpecializedSlopes slopes_at(const TwoVarCharSeries& s, int k);

struct LocalPiece {
  Rational bound;
  std::map<int, int> degree_by_weight;
  bool constant = false;
  std::optional<int> degree;  // set when constant
};

/// Degree of the slope <= h factor at every sample weight. Throws
/// PrecisionError when the slopes up to h are not all certified at some weight.
LocalPiece local_piece_report(const TwoVarCharSeries& s, const Rational& h);

/// Degree of the slope <= h factor of one Newton polygon, with the same rules.
int slope_factor_degree(const NewtonPolygon& polygon, const Rational& h);

/// Held-out comparison: fit on samples minus k_out, specialise at k_out, and
/// compare against the direct series coefficientwise.
struct HeldOutCheck {
  int k = 0;
  int compared_coefficients = 0;  // coefficients with at least one common digit
  int min_digits = 0;             // over compared coefficients
  bool matches = false;
  std::vector<int> mismatched;    // coefficient indices
};

HeldOutCheck held_out_check(const WeightDisc& disc, int depth, int k_out);

}  // namespace slopekit::eigencurve
