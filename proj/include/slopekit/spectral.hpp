#pragma once

#include <boost/rational.hpp>
#include <optional>
#include <string>
#include <vector>

#include "slopekit/matrix.hpp"

namespace slopekit {

using Rational = boost::rational<long long>;

std::string to_string(const Rational& r);

/// det(1 - T*U) truncated to degree D, together with what is known about it.
///
/// Each coefficient carries its own precision. When `valuation_floor` is empty
/// the series is an exact polynomial: coefficients past D vanish. Otherwise
/// `valuation_floor[n]` is an a-priori lower bound for v_p(c_n) of the series
/// the truncation approximates, for n up to valuation_floor.size() - 1.
struct CharSeries {
  int p = 0;
  std::vector<PadicScalar> coeffs;
  int reliable_degree = 0;
  std::vector<long long> valuation_floor;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  /// Smallest per-coefficient precision over c_1..c_D.
  int precision() const;
};

/// Characteristic series of a square matrix via the division-free Berkowitz
/// recursion; exact over Z/p^m.
CharSeries char_series(const PadicMatrix& u);

/// Re-derive reliable_degree from coefficient precisions: the largest n whose
/// valuation is strictly below its precision.
void refresh_reliable_degree(CharSeries& s);

struct Slope {
  Rational value;
  int multiplicity = 0;
};

struct NewtonPolygon {
  std::vector<Slope> slopes;        // certified prefix, strictly increasing
  std::vector<std::pair<int, long long>> vertices;  // certified hull vertices (index, valuation)
  bool truncated = false;           // an undetermined segment follows the certified prefix
  bool empty_warning = false;       // no nonconstant coefficient had a determined valuation
  /// Slopes strictly below this bound are complete; nullopt means every slope
  /// of the series was certified.
  std::optional<Rational> complete_below;

  int total_multiplicity() const;
  /// Multiset of certified slopes strictly below `bound`.
  std::vector<Rational> slopes_below(const Rational& bound) const;
  /// True when every slope < bound is certified.
  bool complete_up_to(const Rational& bound) const;
  std::vector<Rational> flattened() const;
};

/// Lower convex hull of (i, v_p(c_i)). Coefficients whose valuation reaches
/// their precision are treated as unknown values >= max(precision, floor), and
/// the polygon is cut at the first hull vertex that is not determined.
NewtonPolygon newton_polygon(const CharSeries& series);

struct ProjectorResult {
  PadicMatrix idempotent;
  std::size_t rank = 0;
  int iterations = 0;  // n at which T^{n!} stabilised
};

/// e(T) = lim T^{n!}, computed as A_1 = T, A_n = A_{n-1}^n until two
/// consecutive terms agree exactly and the common value is idempotent.
ProjectorResult ordinary_projector(const PadicMatrix& t, int max_iterations = 100000);

}  // namespace slopekit
