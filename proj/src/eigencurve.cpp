#include "slopekit/eigencurve.hpp"

#include <algorithm>
#include <future>
#include <limits>
#include <set>

#include "slopekit/error.hpp"

namespace slopekit::eigencurve {

namespace {

int component_of(int k, int p) { return ((k % (p - 1)) + (p - 1)) % (p - 1); }

int gap_valuation(int p, int a, int b) {
  int d = std::abs(a - b), v = 1;
  while (d != 0 && d % p == 0) d /= p, ++v;
  return v;
}

int top_weight_for(const WeightDisc& disc, int depth, int extra) {
  if (depth < 0) throw InvalidArgument("depth must be nonnegative");
  int top = std::max(extra, *std::max_element(disc.samples.begin(), disc.samples.end()));
  return top + depth * (disc.p - 1);
}

SampleSeries series_at_top(const WeightDisc& disc, int top, int k, int qprec) {
  if (k > top) throw InvalidArgument("weight " + std::to_string(k) + " lies above the shared top weight");
  SampleSeries s;
  s.k = k;
  s.depth = (top - k) / (disc.p - 1);
  const int q = std::max(qprec, coleman::required_qprec(k, disc.p, s.depth));
  const auto basis = coleman::katz_basis(k, disc.p, s.depth, q, disc.m);
  const auto u = coleman::up_matrix(basis, coleman::Normalization::Normalized);
  s.series = coleman::up_char_series(basis, u, coleman::Normalization::Normalized);
  return s;
}

// Digits of c_n(w_k) beyond which the polynomial fit says nothing: the
// remainder f[w_0..w_d, w] prod (w - w_i) is integral times the product.
int tail_digits(const TwoVarCharSeries& s, int k) {
  long long v = 0;
  for (int node : s.fit_weights) {
    if (node == k) return std::numeric_limits<int>::max();
    v += gap_valuation(s.disc.p, k, node);
  }
  return static_cast<int>(std::min<long long>(v, std::numeric_limits<int>::max()));
}

PadicScalar predict(const TwoVarCharSeries& s, std::size_t n, int k) {
  const int cap = std::min(s.disc.m, tail_digits(s, k));
  return hida::newton_specialize(s.newton[n], k, cap);
}

TwoVarCharSeries build(const WeightDisc& disc, int top, int qprec) {
  const int d = validate(disc);
  TwoVarCharSeries out;
  out.disc = disc;
  out.poly_degree = d;
  out.top_weight = top;

  std::vector<int> weights = disc.samples;
  std::sort(weights.begin(), weights.end());
  std::vector<std::future<SampleSeries>> jobs;
  for (int k : weights)
    jobs.push_back(std::async(std::launch::async, [&disc, top, k, qprec] { return series_at_top(disc, top, k, qprec); }));
  for (auto& j : jobs) out.samples.push_back(j.get());

  out.degree = out.samples.front().series.degree();
  out.reliable_degree = out.degree;
  for (const auto& s : out.samples) {
    if (s.series.degree() != out.degree)
      throw VerificationError("Katz dimension " + std::to_string(s.series.degree()) + " at weight " +
                              std::to_string(s.k) + " differs from " + std::to_string(out.degree));
    out.reliable_degree = std::min(out.reliable_degree, s.series.reliable_degree);
  }

  out.fit_weights.assign(weights.begin(), weights.begin() + d + 1);
  for (int n = 0; n <= out.degree; ++n) {
    std::vector<PadicScalar> values;
    for (std::size_t j = 0; j <= static_cast<std::size_t>(d); ++j) values.push_back(out.samples[j].series.coeffs[n]);
    try {
      out.newton.push_back(hida::newton_interpolate(disc.p, disc.component, out.fit_weights, values));
    } catch (const VerificationError& e) {
      throw VerificationError("coefficient c_" + std::to_string(n) + ": " + e.what());
    }
    out.coeffs.push_back(hida::to_monomial(out.newton.back()));
  }

  // Samples past the fit are a genuine test of the degree bound.
  for (std::size_t j = static_cast<std::size_t>(d) + 1; j < out.samples.size(); ++j) {
    const auto& sample = out.samples[j];
    for (int n = 0; n <= out.degree; ++n) {
      const PadicScalar pred = predict(out, static_cast<std::size_t>(n), sample.k);
      const int digits = std::min(pred.precision(), sample.series.coeffs[n].precision());
      if (!pred.congruent(sample.series.coeffs[n], digits))
        throw VerificationError("interpolation residual of c_" + std::to_string(n) + " at weight " +
                                std::to_string(sample.k) + " is nonzero mod " + std::to_string(disc.p) + "^" +
                                std::to_string(digits));
    }
  }
  return out;
}

}  // namespace

int validate(const WeightDisc& disc) {
  qexp::require_supported_prime(disc.p);
  if (disc.m < 1) throw InvalidArgument("disc precision m must be >= 1");
  if (disc.component < 0 || disc.component >= disc.p - 1)
    throw InvalidArgument("component must lie in [0, p-2]");
  if (disc.samples.empty()) throw InvalidArgument("disc has no sample weights");
  if (std::set<int>(disc.samples.begin(), disc.samples.end()).size() != disc.samples.size())
    throw InvalidArgument("repeated sample weight in disc");
  for (int k : disc.samples) {
    if (component_of(k, disc.p) != disc.component)
      throw InvalidArgument("sample weight " + std::to_string(k) + " is not on component " +
                            std::to_string(disc.component));
    // Below weight 2 the normalised U_p carries p^{1-k}, which is not analytic in k.
    if (k < 2) throw InvalidArgument("sample weights must be >= 2, got " + std::to_string(k));
  }
  if (component_of(disc.center, disc.p) != disc.component)
    throw InvalidArgument("disc center is not on the disc's component");
  const int n = static_cast<int>(disc.samples.size());
  const int d = disc.poly_degree < 0 ? n - 1 : disc.poly_degree;
  if (n < d + 1)
    throw InvalidArgument("disc needs at least poly_degree + 1 = " + std::to_string(d + 1) + " samples, has " +
                          std::to_string(n));
  return d;
}

int sample_depth(const WeightDisc& disc, int depth, int k) {
  return (top_weight_for(disc, depth, k) - k) / (disc.p - 1);
}

TwoVarCharSeries two_var_charseries(const WeightDisc& disc, int depth, int qprec) {
  validate(disc);
  return build(disc, top_weight_for(disc, depth, disc.samples.front()), qprec);
}

SampleSeries direct_series(const WeightDisc& disc, int depth, int k, int qprec) {
  validate(disc);
  if (component_of(k, disc.p) != disc.component)
    throw InvalidArgument("weight " + std::to_string(k) + " is not on the disc's component");
  return series_at_top(disc, top_weight_for(disc, depth, k), k, qprec);
}

SpecializedSlopes slopes_at(const TwoVarCharSeries& s, int k) {
  if (component_of(k, s.disc.p) != s.disc.component)
    throw InvalidArgument("weight " + std::to_string(k) + " is not on the disc's component");
  SpecializedSlopes out;
  out.k = k;
  out.extrapolated = std::find(s.fit_weights.begin(), s.fit_weights.end(), k) == s.fit_weights.end();
  out.series.p = s.disc.p;
  for (std::size_t n = 0; n < s.newton.size(); ++n) out.series.coeffs.push_back(predict(s, n, k));
  out.series.valuation_floor =
      coleman::katz_valuation_floor(k, s.disc.p, coleman::Normalization::Normalized, 2 * s.degree + 2 * (s.disc.p + 1));
  refresh_reliable_degree(out.series);
  out.polygon = newton_polygon(out.series);
  return out;
}

int slope_factor_degree(const NewtonPolygon& polygon, const Rational& h) {
  if (polygon.complete_below && *polygon.complete_below <= h) {
    if (*polygon.complete_below == h)
      throw PrecisionError("Newton break at exactly " + to_string(h) + ": no slope <= h decomposition is certified");
    throw PrecisionError("slopes up to " + to_string(h) + " are not certified; complete below " +
                         to_string(*polygon.complete_below) + " only");
  }
  int degree = 0;
  for (const auto& sl : polygon.slopes)
    if (sl.value <= h) degree += sl.multiplicity;
  return degree;
}

LocalPiece local_piece_report(const TwoVarCharSeries& s, const Rational& h) {
  LocalPiece out;
  out.bound = h;
  for (const auto& sample : s.samples) {
    const auto sl = slopes_at(s, sample.k);
    try {
      out.degree_by_weight[sample.k] = slope_factor_degree(sl.polygon, h);
    } catch (const PrecisionError& e) {
      throw PrecisionError("weight " + std::to_string(sample.k) + ": " + e.what());
    }
  }
  std::set<int> degrees;
  for (const auto& [k, d] : out.degree_by_weight) degrees.insert(d);
  out.constant = degrees.size() == 1;
  if (out.constant) out.degree = *degrees.begin();
  return out;
}

HeldOutCheck held_out_check(const WeightDisc& disc, int depth, int k_out) {
  validate(disc);
  WeightDisc sub = disc;
  sub.samples.erase(std::remove(sub.samples.begin(), sub.samples.end(), k_out), sub.samples.end());
  if (sub.samples.size() == disc.samples.size())
    throw InvalidArgument("held-out weight " + std::to_string(k_out) + " is not a sample of the disc");
  if (sub.samples.empty()) throw InvalidArgument("held-out check needs at least two samples");
  sub.poly_degree = disc.poly_degree < 0 ? -1 : std::min<int>(disc.poly_degree, static_cast<int>(sub.samples.size()) - 1);

  const int top = top_weight_for(disc, depth, k_out);
  const auto fit = build(sub, top, 0);
  const auto direct = series_at_top(disc, top, k_out, 0);
  const auto at_k = slopes_at(fit, k_out);

  HeldOutCheck out;
  out.k = k_out;
  out.min_digits = std::numeric_limits<int>::max();
  for (int n = 1; n <= fit.degree; ++n) {
    const int digits = std::min(at_k.series.coeffs[n].precision(), direct.series.coeffs[n].precision());
    if (digits < 1) continue;
    ++out.compared_coefficients;
    out.min_digits = std::min(out.min_digits, digits);
    if (!at_k.series.coeffs[n].congruent(direct.series.coeffs[n], digits)) out.mismatched.push_back(n);
  }
  if (out.compared_coefficients == 0) out.min_digits = 0;
  out.matches = out.compared_coefficients > 0 && out.mismatched.empty();
  return out;
}

}  // namespace slopekit::eigencurve
