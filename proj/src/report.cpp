#include "report.hpp"

namespace slopekit::report {

Json scalar(const PadicScalar& x) { return Json{{"value", x.to_string()}, {"digits", num(x.precision())}}; }

Json modulus(const Modulus& mod) { return Json{{"p", num(mod.p())}, {"m", num(mod.m())}}; }

Json matrix(const PadicMatrix& a) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < a.cols(); ++j) row.push_back(to_decimal(a(i, j)));
    rows.push_back(std::move(row));
  }
  Json out{{"modulus", modulus(a.modulus())}, {"precision", num(a.precision())}};
  if (!a.basis_tag().empty()) out["basis"] = a.basis_tag();
  out["rows"] = std::move(rows);
  return out;
}

Json series(const QSeries& f) {
  Json ring = f.ring().is_integers() ? Json("Z") : Json{{"p", num(f.ring().p)}, {"m", num(f.ring().m)}};
  Json coeffs = Json::array();
  for (const auto& c : f.coeffs()) coeffs.push_back(c.str());
  return Json{{"ring", std::move(ring)}, {"qprec", num(f.qprec())}, {"coeffs", std::move(coeffs)}};
}

Json char_series(const CharSeries& s) {
  Json coeffs = Json::array();
  for (const auto& c : s.coeffs) coeffs.push_back(scalar(c));
  return coeffs;
}

Json rationals(const std::vector<Rational>& xs) {
  Json out = Json::array();
  for (const auto& x : xs) out.push_back(to_string(x));
  return out;
}

Json polygon(const NewtonPolygon& poly) {
  Json slopes = Json::array();
  for (const auto& s : poly.slopes) slopes.push_back(Json{{"slope", to_string(s.value)}, {"mult", num(s.multiplicity)}});
  Json vertices = Json::array();
  for (const auto& [i, v] : poly.vertices) vertices.push_back(Json::array({num(i), num(v)}));
  Json out{{"slopes", std::move(slopes)}, {"vertices", std::move(vertices)}};
  out["complete_below"] = poly.complete_below ? Json(to_string(*poly.complete_below)) : Json(nullptr);
  out["truncated"] = poly.truncated;
  out["empty_warning"] = poly.empty_warning;
  return out;
}

Json iwasawa(const hida::IwasawaTruncation& f) {
  Json coeffs = Json::array();
  for (const auto& c : f.coeffs) coeffs.push_back(scalar(c));
  return coeffs;
}

Json slope_report(const coleman::SlopeReport& r) {
  Json out{{"p", num(r.p)},
           {"k", num(r.k)},
           {"I", num(r.depth)},
           {"qprec", num(r.qprec)},
           {"m", num(r.m)},
           {"m_effective", num(r.m_effective)},
           {"D", num(r.series.degree())},
           {"charseries", char_series(r.series)},
           {"reliable_degree", num(r.series.reliable_degree)}};
  const auto poly = polygon(r.polygon);
  for (auto it = poly.begin(); it != poly.end(); ++it) out[it.key()] = it.value();
  out["naive_slopes"] = polygon(r.naive_polygon)["slopes"];
  out["nonnegative"] = r.nonnegative;
  out["naive_consistent"] = r.naive_consistent;
  out["classical"] = r.classical ? rationals([&] {
    auto all = r.classical->all();
    std::sort(all.begin(), all.end());
    return all;
  }())
                                 : Json(nullptr);
  return out;
}

Json classicality(const coleman::ClassicalityVerdict& v) {
  Json out = slope_report(v.report);
  out["window"] = to_string(v.window);
  out["full_window"] = v.full_window;
  out["overconvergent_below_window"] = rationals(v.overconvergent);
  out["classical_below_window"] = rationals(v.classical);
  out["boundary_classical"] = num(v.boundary_classical);
  out["boundary_overconvergent"] = num(v.boundary_overconvergent);
  out["verdict"] = coleman::to_string(v.kind);
  return out;
}

Json control(const hida::ControlReport& r) {
  return Json{{"p", num(r.p)},
              {"k", num(r.k)},
              {"n", num(r.n)},
              {"source_weight", num(r.source_weight)},
              {"target_weight", num(r.target_weight)},
              {"source_rank", num(r.source_rank)},
              {"target_rank", num(r.target_rank)},
              {"contained", r.contained},
              {"weight_two", r.weight_two},
              {"passed", r.passed()}};
}

Json family(const hida::OrdinaryFamily& fam) {
  Json weights = Json::array();
  for (int k : fam.weights) weights.push_back(num(k));
  std::vector<int> labels{fam.p};
  labels.insert(labels.end(), fam.hecke_primes.begin(), fam.hecke_primes.end());

  Json keys = Json::array(), eigen = Json::object(), fitted = Json::object();
  for (int l : labels) {
    eigen[num(l)] = Json::array();
    fitted[num(l)] = Json::array();
  }
  for (const auto& s : fam.systems) {
    keys.push_back(s.key);
    for (int l : labels) {
      Json vals = Json::array();
      for (const auto& v : s.values.at(l)) vals.push_back(v.to_string());
      eigen[num(l)].push_back(std::move(vals));
      fitted[num(l)].push_back(iwasawa(s.fitted.at(l)));
    }
  }
  Json checks = Json::array();
  for (const auto& c : fam.congruence_checks)
    checks.push_back(Json{{"system", c.system},
                          {"ell", num(c.ell)},
                          {"k1", num(c.k1)},
                          {"k2", num(c.k2)},
                          {"digits", num(c.digits)},
                          {"holds", c.holds}});
  return Json{{"p", num(fam.p)},
              {"component", num(fam.component)},
              {"m", num(fam.m)},
              {"rank", num(fam.rank)},
              {"weights", std::move(weights)},
              {"systems", std::move(keys)},
              {"eigenvalues", std::move(eigen)},
              {"fitted", std::move(fitted)},
              {"congruence_checks", std::move(checks)},
              {"ambiguities", fam.ambiguities},
              {"round_trip", fam.round_trip},
              {"passed", fam.passed()}};
}

namespace {

Json probe(const duality::ThetaProbe& t) {
  return Json{{"shift", num(t.shift)},
              {"probed", rationals(t.probed)},
              {"found", rationals(t.found)},
              {"missing", rationals(t.missing)},
              {"theta_kernel", num(t.theta_kernel)},
              {"holds", t.holds()}};
}

}  // namespace

Json duality(const duality::DualityReport& r) {
  Json out{{"p", num(r.p)}, {"k", num(r.k)}, {"I", num(r.depth)}, {"m", num(r.m)}};
  out["structural"] = r.structural;
  out["rank_duality"] = Json{{"holds", r.rank_duality},
                             {"ordinary_rank", num(static_cast<long long>(r.ordinary_rank))},
                             {"dual_ordinary_rank", num(static_cast<long long>(r.dual_ordinary_rank))}};
  out["theta_probe"] = probe(r.theta);
  out["negative_control"] = probe(r.negative_control);
  out["weight_k"] = slope_report(r.weight_k);
  out["weight_2_minus_k"] = slope_report(r.weight_dual);
  out["verdict"] = duality::to_string(r.verdict());
  return out;
}

}  // namespace slopekit::report
