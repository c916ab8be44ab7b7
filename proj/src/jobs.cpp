#include "slopekit/jobs.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "report.hpp"
#include "slopekit/acceptance.hpp"
#include "slopekit/error.hpp"

namespace slopekit {

namespace {

using report::Json;
using report::num;

// Katz dimensions above this take minutes rather than seconds.
constexpr int kMaxDimension = 400;
constexpr int kDefaultM = 10;

int max_m(int p) {
  int m = 0;
  Residue pm = 1;
  while (pm < (static_cast<Residue>(1) << 126) / static_cast<Residue>(p)) pm *= static_cast<Residue>(p), ++m;
  return m;
}

template <class T>
T need(const std::optional<T>& v, const std::string& command, const std::string& flag) {
  if (!v) throw InvalidArgument(command + ": --" + flag + " is required");
  return *v;
}

void check_prime(int p) {
  if (!qexp::supported_prime(p))
    throw InvalidArgument("p = " + std::to_string(p) + " is not supported; use a prime p >= 5 (tested: 5, 7, 11, 13)");
}

void check_m(const JobConfig& c) {
  if (*c.m < 1) throw InvalidArgument("m must be >= 1, got " + std::to_string(*c.m));
  if (c.p && *c.m > max_m(*c.p))
    throw InvalidArgument("m = " + std::to_string(*c.m) + " exceeds the residue range for p = " + std::to_string(*c.p) +
                          "; the maximum is " + std::to_string(max_m(*c.p)));
}

void check_even_weight(int k, const std::string& what, int min) {
  if (k % 2 != 0) throw InvalidArgument(what + " must be even, got " + std::to_string(k));
  if (k < min) throw InvalidArgument(what + " must be >= " + std::to_string(min) + ", got " + std::to_string(k));
}

// Depth and q-precision for a Katz computation at weight k.
void check_katz(JobConfig& c, int k) {
  if (!c.depth) c.depth = coleman::default_depth(*c.p, *c.m);
  if (*c.depth < 0) throw InvalidArgument("I must be >= 0, got " + std::to_string(*c.depth));
  const int d = coleman::katz_dimension(k, *c.p, *c.depth);
  if (d > kMaxDimension)
    throw InvalidArgument("I = " + std::to_string(*c.depth) + " gives Katz dimension " + std::to_string(d) +
                          " at weight " + std::to_string(k) + "; lower I so that D <= " + std::to_string(kMaxDimension));
  const int need_q = coleman::required_qprec(k, *c.p, *c.depth);
  if (!c.qprec) c.qprec = need_q;
  if (*c.qprec < need_q)
    throw InvalidArgument("Q = " + std::to_string(*c.qprec) + " is below p * D = " + std::to_string(need_q) +
                          " (D = " + std::to_string(d) + " at I = " + std::to_string(*c.depth) + ")");
}

Rational parse_rational(const std::string& s) {
  try {
    std::size_t used = 0;
    const auto slash = s.find('/');
    const long long a = std::stoll(s.substr(0, slash), &used);
    if (slash == std::string::npos) {
      if (used != s.size()) throw std::invalid_argument(s);
      return Rational(a);
    }
    const std::string den = s.substr(slash + 1);
    const long long b = std::stoll(den, &used);
    if (used != den.size() || b == 0) throw std::invalid_argument(s);
    return Rational(a, b);
  } catch (const std::exception&) {
    throw InvalidArgument("slope bound '" + s + "' is not an integer or a/b fraction");
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

JobResult basis_job(const JobConfig& c) {
  const int k = *c.k;
  const int d = qexp::basis_dimension(k);
  const auto ring = c.p ? CoefficientRing::mod_pm(*c.p, *c.m) : CoefficientRing::integers();
  const auto b = qexp::miller_basis(k, *c.qprec, ring);
  Json forms = Json::array();
  for (const auto& f : b.forms) forms.push_back(report::series(f));
  return {dump(Json{{"k", num(k)}, {"level", b.level_tag}, {"dim", num(d)}, {"qprec", num(*c.qprec)}, {"forms", forms}}),
          true};
}

JobResult tp_matrix_job(const JobConfig& c) {
  const int k = *c.k, p = *c.p, l = *c.ell;
  const auto b = qexp::miller_basis(k, *c.qprec);
  const auto op = qexp::operator_matrix(b, [&](const QSeries& f) { return qexp::hecke_tp(f, k, l); }, Modulus(p, *c.m));
  Json out{{"p", num(p)}, {"k", num(k)}, {"ell", num(l)}, {"m", num(*c.m)}, {"qprec", num(*c.qprec)},
           {"dim", num(b.dim())}};
  out["closed"] = op.closed;
  out["compared_coefficients"] = num(op.compared_coefficients);
  out["matrix"] = report::matrix(op.matrix);
  return {dump(out), op.closed};
}

JobResult up_matrix_job(const JobConfig& c) {
  const auto basis = coleman::katz_basis(*c.k, *c.p, *c.depth, *c.qprec, *c.m);
  const auto u = coleman::up_matrix(basis);
  Json blocks = Json::array();
  for (int s : basis.block_sizes) blocks.push_back(num(s));
  Json out{{"p", num(*c.p)}, {"k", num(*c.k)}, {"I", num(*c.depth)}, {"qprec", num(*c.qprec)}, {"m", num(*c.m)},
           {"D", num(basis.dim())}, {"block_sizes", blocks}, {"matrix", report::matrix(u)}};
  return {dump(out), true};
}

JobResult charseries_job(const JobConfig& c) {
  const auto r = coleman::slope_spectrum(*c.k, *c.p, *c.depth, *c.m, *c.qprec);
  Json out{{"p", num(r.p)}, {"k", num(r.k)}, {"I", num(r.depth)}, {"qprec", num(r.qprec)}, {"m", num(r.m)},
           {"m_effective", num(r.m_effective)}, {"D", num(r.series.degree())},
           {"charseries", report::char_series(r.series)}, {"reliable_degree", num(r.series.reliable_degree)}};
  Json floor = Json::array();
  for (long long f : r.series.valuation_floor) floor.push_back(num(f));
  out["valuation_floor"] = floor;
  return {dump(out), true};
}

JobResult disc_job(const JobConfig& c) {
  eigencurve::WeightDisc disc{*c.p, *c.component, *c.center, c.weights, *c.poly_degree, *c.m};
  const auto s = eigencurve::two_var_charseries(disc, *c.depth);
  Json samples = Json::array(), coeffs = Json::array(), tables = Json::object(), flat = Json::object(),
       held = Json::array();
  for (const auto& smp : s.samples) samples.push_back(num(smp.k));
  for (const auto& f : s.coeffs) coeffs.push_back(report::iwasawa(f));
  for (const auto& smp : s.samples) tables[num(smp.k)] = report::polygon(eigencurve::slopes_at(s, smp.k).polygon);
  if (std::find(disc.samples.begin(), disc.samples.end(), disc.center) == disc.samples.end()) {
    const auto at_center = eigencurve::slopes_at(s, disc.center);
    Json t = report::polygon(at_center.polygon);
    t["extrapolated"] = at_center.extrapolated;
    tables[num(disc.center)] = t;
  }
  bool passed = true;
  for (const auto& h : c.bounds) {
    try {
      const auto piece = eigencurve::local_piece_report(s, parse_rational(h));
      Json by_weight = Json::object();
      for (const auto& [k, d] : piece.degree_by_weight) by_weight[num(k)] = num(d);
      flat[h] = Json{{"degree", piece.degree ? Json(num(*piece.degree)) : Json(nullptr)},
                     {"constant", piece.constant},
                     {"by_weight", by_weight}};
    } catch (const PrecisionError& e) {
      flat[h] = Json{{"degree", nullptr}, {"constant", false}, {"error", e.what()}};
    }
  }
  if (disc.samples.size() >= 2)
    for (int k : disc.samples) {
      const auto h = eigencurve::held_out_check(disc, *c.depth, k);
      Json mism = Json::array();
      for (int n : h.mismatched) mism.push_back(num(n));
      held.push_back(Json{{"k", num(k)},
                          {"compared_coefficients", num(h.compared_coefficients)},
                          {"min_digits", num(h.min_digits)},
                          {"matches", h.matches},
                          {"mismatched", mism}});
      passed = passed && h.matches;
    }
  Json out{{"p", num(disc.p)},     {"component", num(disc.component)}, {"center", num(disc.center)},
           {"samples", samples},   {"I", num(*c.depth)},               {"top_weight", num(s.top_weight)},
           {"m", num(disc.m)},     {"poly_degree", num(s.poly_degree)}, {"D", num(s.degree)},
           {"reliable_degree", num(s.reliable_degree)}, {"coeffs", coeffs}, {"slope_tables", tables},
           {"flat_degree_by_bound", flat}, {"held_out", held}};
  return {dump(out), passed};
}

JobResult acceptance_job(const JobConfig& c) {
  const auto results = acceptance::run_all(c.seed);
  Json rows = Json::array();
  bool all = true;
  for (const auto& r : results) {
    rows.push_back(Json{{"id", num(r.id)}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
    all = all && r.passed;
  }
  return {dump(Json{{"seed", std::to_string(c.seed)}, {"criteria", rows}, {"passed", all}}), all};
}

}  // namespace

const std::vector<std::string>& job_commands() {
  static const std::vector<std::string> commands{"basis",  "tp-matrix",    "ordinary-rank", "control-check",
                                                 "family-fit", "up-matrix", "charseries",    "slopes",
                                                 "classicality", "disc",    "duality",       "acceptance"};
  return commands;
}

void validate(JobConfig& c) {
  const auto& cmds = job_commands();
  if (std::find(cmds.begin(), cmds.end(), c.command) == cmds.end())
    throw InvalidArgument("unknown command '" + c.command + "'");
  const std::string& cmd = c.command;
  if (c.command == "acceptance") return;
  if (!c.m) c.m = kDefaultM;

  if (cmd == "basis") {
    check_even_weight(need(c.k, cmd, "k"), "k", 0);
    if (c.p) {
      check_prime(*c.p);
      check_m(c);
    }
    const int d = qexp::basis_dimension(*c.k);
    if (!c.qprec) c.qprec = std::max(d, 1) + 10;
    if (*c.qprec < std::max(d, 1))
      throw InvalidArgument("Q = " + std::to_string(*c.qprec) + " is below dim M_k = " + std::to_string(d));
    return;
  }

  if (cmd == "family-fit" || cmd == "disc") {
    check_prime(need(c.p, cmd, "p"));
    check_m(c);
    if (c.weights.empty()) throw InvalidArgument(cmd + ": --weights needs at least one weight");
    std::sort(c.weights.begin(), c.weights.end());
    if (std::adjacent_find(c.weights.begin(), c.weights.end()) != c.weights.end())
      throw InvalidArgument(cmd + ": repeated weight in --weights");
    const int p = *c.p;
    const int comp = ((c.weights.front() % (p - 1)) + (p - 1)) % (p - 1);
    if (!c.component) c.component = comp;
    for (int k : c.weights) {
      check_even_weight(k, "weight", cmd == "disc" ? 2 : 3);
      if (((k % (p - 1)) + (p - 1)) % (p - 1) != *c.component)
        throw InvalidArgument("weight " + std::to_string(k) + " is not on component " + std::to_string(*c.component) +
                              " mod " + std::to_string(p - 1));
    }
    if (cmd == "family-fit") {
      if (c.hecke_primes.empty()) c.hecke_primes = {p == 2 ? 3 : 2};
      for (int l : c.hecke_primes)
        if (l == p || l < 2 || !is_prime(l))
          throw InvalidArgument("Hecke prime " + std::to_string(l) + " must be a prime other than p");
      return;
    }
    if (!c.center) c.center = c.weights[c.weights.size() / 2];
    if (!c.poly_degree) c.poly_degree = -1;
    if (*c.poly_degree >= static_cast<int>(c.weights.size()))
      throw InvalidArgument("poly degree " + std::to_string(*c.poly_degree) + " needs at least " +
                            std::to_string(*c.poly_degree + 1) + " sample weights");
    if (c.bounds.empty()) c.bounds = {"0"};
    for (const auto& h : c.bounds) parse_rational(h);
    check_katz(c, c.weights.back());
    const int top = c.weights.back() + *c.depth * (p - 1);
    if (qexp::basis_dimension(top) > kMaxDimension)
      throw InvalidArgument("top weight " + std::to_string(top) + " is too large; lower I");
    return;
  }

  check_prime(need(c.p, cmd, "p"));
  check_m(c);
  const int k = need(c.k, cmd, "k");

  if (cmd == "tp-matrix") {
    check_even_weight(k, "k", 0);
    if (!c.ell) c.ell = *c.p;
    if (*c.ell < 2 || !is_prime(*c.ell)) throw InvalidArgument("ell must be prime");
    const int d = qexp::basis_dimension(k);
    const int need_q = *c.ell * (std::max(d, 1) + 1);
    if (!c.qprec) c.qprec = *c.ell * (d + 8);
    if (*c.qprec < need_q)
      throw InvalidArgument("Q = " + std::to_string(*c.qprec) + " is below ell * (dim + 1) = " + std::to_string(need_q) +
                            ", needed to read coordinates and test closure");
    return;
  }
  if (cmd == "ordinary-rank") {
    check_even_weight(k, "k", 2);
    return;
  }
  if (cmd == "control-check") {
    check_even_weight(k, "k", 2);
    if (!c.n) c.n = 1;
    if (*c.n < (k == 2 ? 1 : 0)) throw InvalidArgument("n must be >= " + std::to_string(k == 2 ? 1 : 0));
    return;
  }
  if (k % 2 != 0) throw InvalidArgument("k must be even, got " + std::to_string(k));
  if (cmd == "classicality" || cmd == "duality") {
    if (k < 2) throw InvalidArgument(cmd + " needs k >= 2, got " + std::to_string(k));
    if (*c.m < 3) throw InvalidArgument(cmd + " needs m >= 3 so that the slope window m - 2 is positive");
  }
  if (cmd == "duality" && c.qprec) throw InvalidArgument("duality picks Q itself for both weights; drop --Q");
  check_katz(c, k);
  if (cmd == "duality") {
    const int d = coleman::katz_dimension(2 - k, *c.p, *c.depth);
    if (d > kMaxDimension) throw InvalidArgument("I is too large for weight 2 - k; lower I");
  }
}

JobResult run_job(const JobConfig& config) {
  JobConfig c = config;
  validate(c);
  const std::string& cmd = c.command;
  if (cmd == "basis") return basis_job(c);
  if (cmd == "tp-matrix") return tp_matrix_job(c);
  if (cmd == "ordinary-rank") {
    const int r = hida::ordinary_rank_mod_p(*c.k, *c.p);
    return {dump(Json{{"p", num(*c.p)}, {"k", num(*c.k)}, {"rank", num(r)}}), true};
  }
  if (cmd == "control-check") {
    const auto r = *c.k == 2 ? hida::control_check_h0_weight2(*c.p, *c.n) : hida::control_check_h0(*c.k, *c.p, *c.n);
    return {dump(report::control(r)), r.passed()};
  }
  if (cmd == "family-fit") {
    const auto fam = hida::fit_family(*c.p, *c.component, c.weights, c.hecke_primes, *c.m);
    return {dump(report::family(fam)), fam.passed()};
  }
  if (cmd == "up-matrix") return up_matrix_job(c);
  if (cmd == "charseries") return charseries_job(c);
  if (cmd == "slopes") {
    const auto r = coleman::slope_spectrum(*c.k, *c.p, *c.depth, *c.m, *c.qprec);
    return {dump(report::slope_report(r)), r.nonnegative && r.naive_consistent};
  }
  if (cmd == "classicality") {
    const auto v = coleman::classicality_check(*c.k, *c.p, *c.depth, *c.m, *c.qprec);
    return {dump(report::classicality(v)), v.kind != coleman::ClassicalityVerdict::Kind::Fail};
  }
  if (cmd == "disc") return disc_job(c);
  if (cmd == "duality") {
    const auto r = duality::charseries_duality_check(*c.k, *c.p, *c.depth, *c.m, c.seed);
    return {dump(report::duality(r)), r.verdict() != duality::DualityReport::Verdict::Fail};
  }
  return acceptance_job(c);
}

JobConfig job_from_json(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw InvalidArgument("config must be a JSON object");
  JobConfig c;
  const std::map<std::string, std::optional<int> JobConfig::*> ints{
      {"p", &JobConfig::p},           {"k", &JobConfig::k},         {"I", &JobConfig::depth},
      {"Q", &JobConfig::qprec},       {"m", &JobConfig::m},         {"n", &JobConfig::n},
      {"ell", &JobConfig::ell},       {"component", &JobConfig::component}, {"center", &JobConfig::center},
      {"poly_degree", &JobConfig::poly_degree}};
  auto as_int = [](const Json& v, const std::string& key) -> long long {
    if (v.is_number_integer()) return v.get<long long>();
    if (v.is_string()) {
      try {
        std::size_t used = 0;
        const long long x = std::stoll(v.get<std::string>(), &used);
        if (used == v.get<std::string>().size()) return x;
      } catch (const std::exception&) {
      }
    }
    throw InvalidArgument("config field '" + key + "' must be an integer");
  };
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    if (key == "command") {
      if (!it->is_string()) throw InvalidArgument("config field 'command' must be a string");
      c.command = it->get<std::string>();
    } else if (auto f = ints.find(key); f != ints.end()) {
      c.*(f->second) = static_cast<int>(as_int(*it, key));
    } else if (key == "weights" || key == "hecke_primes") {
      if (!it->is_array()) throw InvalidArgument("config field '" + key + "' must be a list");
      auto& dst = key == "weights" ? c.weights : c.hecke_primes;
      for (const auto& v : *it) dst.push_back(static_cast<int>(as_int(v, key)));
    } else if (key == "bounds") {
      if (!it->is_array()) throw InvalidArgument("config field 'bounds' must be a list");
      for (const auto& v : *it) c.bounds.push_back(v.is_string() ? v.get<std::string>() : v.dump());
    } else if (key == "seed") {
      c.seed = static_cast<std::uint64_t>(as_int(*it, key));
    } else {
      throw InvalidArgument("unknown config field '" + key + "'");
    }
  }
  if (c.command.empty()) throw InvalidArgument("config needs a 'command'");
  return c;
}

}  // namespace slopekit
