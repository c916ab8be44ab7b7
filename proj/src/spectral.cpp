#include "slopekit/spectral.hpp"

#include <algorithm>
#include <limits>

#include "slopekit/error.hpp"

namespace slopekit {

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

int CharSeries::precision() const {
  int prec = std::numeric_limits<int>::max();
  for (std::size_t n = 1; n < coeffs.size(); ++n) prec = std::min(prec, coeffs[n].precision());
  return coeffs.size() <= 1 ? (coeffs.empty() ? 0 : coeffs[0].precision()) : prec;
}

CharSeries char_series(const PadicMatrix& u) {
  if (!u.square()) throw InvalidArgument("char_series: matrix is not square");
  const Modulus& mod = u.modulus();
  const std::size_t n = u.rows();

  // Berkowitz: the characteristic polynomial of A[i:, i:] from that of
  // A[i+1:, i+1:] via a lower-triangular Toeplitz product. Coefficients are
  // kept highest degree first, which is also the order of det(1 - T*A).
  std::vector<Residue> vect{1 % mod.value()};
  for (std::size_t i = n; i-- > 0;) {
    const std::size_t s = n - i;
    std::vector<Residue> t(s + 1, 0);
    t[0] = 1 % mod.value();
    t[1] = mod.neg(u(i, i));
    std::vector<Residue> d(s - 1);
    for (std::size_t r = 0; r + 1 < s; ++r) d[r] = u(i + 1 + r, i);
    for (std::size_t j = 0; j + 1 < s; ++j) {
      Residue dot = 0;
      for (std::size_t c = 0; c + 1 < s; ++c) dot = mod.add(dot, mod.mul(u(i, i + 1 + c), d[c]));
      t[2 + j] = mod.neg(dot);
      if (j + 2 < s) {
        std::vector<Residue> nd(s - 1, 0);
        for (std::size_t r = 0; r + 1 < s; ++r) {
          Residue acc = 0;
          for (std::size_t c = 0; c + 1 < s; ++c) acc = mod.add(acc, mod.mul(u(i + 1 + r, i + 1 + c), d[c]));
          nd[r] = acc;
        }
        d = std::move(nd);
      }
    }
    std::vector<Residue> next(s + 1, 0);
    for (std::size_t r = 0; r <= s; ++r) {
      Residue acc = 0;
      for (std::size_t c = 0; c < s && c <= r; ++c) acc = mod.add(acc, mod.mul(t[r - c], vect[c]));
      next[r] = acc;
    }
    vect = std::move(next);
  }

  CharSeries out;
  out.p = mod.p();
  const Modulus prec_mod = mod.with_precision(u.precision());
  for (Residue c : vect) out.coeffs.emplace_back(prec_mod, c);
  refresh_reliable_degree(out);
  return out;
}

void refresh_reliable_degree(CharSeries& s) {
  s.reliable_degree = 0;
  for (std::size_t n = 1; n < s.coeffs.size(); ++n)
    if (s.coeffs[n].valuation() < s.coeffs[n].precision()) s.reliable_degree = static_cast<int>(n);
}

int NewtonPolygon::total_multiplicity() const {
  int t = 0;
  for (const auto& s : slopes) t += s.multiplicity;
  return t;
}

std::vector<Rational> NewtonPolygon::slopes_below(const Rational& bound) const {
  std::vector<Rational> out;
  for (const auto& s : slopes)
    if (s.value < bound)
      for (int i = 0; i < s.multiplicity; ++i) out.push_back(s.value);
  return out;
}

bool NewtonPolygon::complete_up_to(const Rational& bound) const {
  return !complete_below || bound <= *complete_below;
}

std::vector<Rational> NewtonPolygon::flattened() const {
  std::vector<Rational> out;
  for (const auto& s : slopes)
    for (int i = 0; i < s.multiplicity; ++i) out.push_back(s.value);
  return out;
}

NewtonPolygon newton_polygon(const CharSeries& series) {
  if (series.coeffs.empty() || series.coeffs[0].residue() != 1 % series.coeffs[0].modulus().value())
    throw InvalidArgument("newton_polygon: constant coefficient must be 1");

  struct Point {
    int x;
    long long y;
    bool known;
  };
  std::vector<Point> pts;
  const int d = series.degree();
  const int horizon = std::max(d, static_cast<int>(series.valuation_floor.size()) - 1);
  for (int j = 0; j <= horizon; ++j) {
    const long long floor = j < static_cast<int>(series.valuation_floor.size())
                                ? series.valuation_floor[j]
                                : std::numeric_limits<long long>::min();
    if (j <= d) {
      const PadicScalar& c = series.coeffs[j];
      const int v = c.valuation();
      if (v < c.precision() || j == 0) {
        pts.push_back({j, v, true});
      } else {
        pts.push_back({j, std::max<long long>(c.precision(), floor), false});
      }
    } else {
      pts.push_back({j, floor, false});
    }
  }

  // Lower hull; collinear points are kept so known vertices on a segment
  // ending in an unknown point stay visible.
  std::vector<Point> hull;
  for (const auto& pt : pts) {
    while (hull.size() >= 2) {
      const Point& a = hull[hull.size() - 2];
      const Point& b = hull.back();
      // b strictly above segment a-pt?
      const __int128 lhs = static_cast<__int128>(b.y - a.y) * (pt.x - a.x);
      const __int128 rhs = static_cast<__int128>(pt.y - a.y) * (b.x - a.x);
      if (lhs > rhs) hull.pop_back();
      else break;
    }
    hull.push_back(pt);
  }

  NewtonPolygon poly;
  poly.vertices.emplace_back(0, 0);
  for (std::size_t i = 1; i < hull.size(); ++i) {
    const Point& a = hull[i - 1];
    const Point& b = hull[i];
    const Rational slope(b.y - a.y, b.x - a.x);
    if (!b.known) {
      poly.truncated = true;
      poly.complete_below = slope;
      break;
    }
    if (!poly.slopes.empty() && poly.slopes.back().value == slope) {
      poly.slopes.back().multiplicity += b.x - a.x;
    } else {
      poly.slopes.push_back({slope, b.x - a.x});
    }
    poly.vertices.emplace_back(b.x, b.y);
  }
  bool any_known = false;
  for (std::size_t j = 1; j < pts.size(); ++j) any_known = any_known || pts[j].known;
  poly.empty_warning = !any_known && pts.size() > 1;
  return poly;
}

ProjectorResult ordinary_projector(const PadicMatrix& t, int max_iterations) {
  if (!t.square()) throw InvalidArgument("ordinary_projector: matrix is not square");
  PadicMatrix prev = t;
  for (int n = 2; n <= max_iterations; ++n) {
    PadicMatrix next = prev.pow(static_cast<unsigned long long>(n));
    if (next == prev && next * next == next) {
      ProjectorResult r{next, rank_mod_p(next), n - 1};
      r.idempotent.set_basis_tag(t.basis_tag());
      return r;
    }
    prev = std::move(next);
  }
  throw InternalError("ordinary_projector: T^{n!} did not stabilise within " + std::to_string(max_iterations) +
                      " steps");
}

}  // namespace slopekit
