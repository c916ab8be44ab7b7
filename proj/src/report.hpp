#pragma once

// JSON views of library results. Every number is a decimal string.

#include "json.hpp"
#include "slopekit/coleman.hpp"
#include "slopekit/duality.hpp"
#include "slopekit/eigencurve.hpp"
#include "slopekit/hida.hpp"
#include "slopekit/qexp.hpp"

namespace slopekit::report {

using Json = nlohmann::ordered_json;

inline std::string num(long long x) { return std::to_string(x); }

Json scalar(const PadicScalar& x);
Json modulus(const Modulus& mod);
Json matrix(const PadicMatrix& a);
Json series(const QSeries& f);
Json char_series(const CharSeries& s);
Json polygon(const NewtonPolygon& poly);
Json rationals(const std::vector<Rational>& xs);
Json iwasawa(const hida::IwasawaTruncation& f);

Json slope_report(const coleman::SlopeReport& r);
Json classicality(const coleman::ClassicalityVerdict& v);
Json control(const hida::ControlReport& r);
Json family(const hida::OrdinaryFamily& fam);
Json duality(const duality::DualityReport& r);

}  // namespace slopekit::report
